#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drselect/core/config.hpp"
#include "drselect/core/dataset.hpp"
#include "drselect/learners/learner.hpp"

namespace drselect::functionals {

using learners::FitTarget;
using learners::FittedNuisance;

// How the learner's pr(A=1|X) enters H as p(X).
enum class PSemantics {
    raw,                    // p = pi
    reciprocal,             // p = 1 / pi
    reciprocal_complement,  // p = 1 / (1 - pi)
    inverse_odds,           // p = (1 - pi) / pi
};

double map_propensity(PSemantics s, double pi);

struct Observation {
    std::span<const double> x;
    int a;
    double y;
};

struct HCoefficients {
    double h1;
    double h2;
    double h3;
    double h4;
};

// b(X) of one term: a single fit, or numerator / denominator fits with the
// denominator floored at 1e-6.
struct OutcomeSlot {
    enum class Combine { single, ratio };
    std::vector<FitTarget> fits;
    Combine combine = Combine::single;
};

// H = sum over terms of b p h1 + b h2 + p h3 + h4. Every built-in functional
// has influence function H - psi; ate uses two terms (treated arm minus
// control arm), the others one.
struct HTerm {
    PSemantics p;
    std::size_t slot;
    HCoefficients (*h)(const Observation&, double alpha);
    const char* name;
};

struct FunctionalDef {
    FunctionalKind kind = FunctionalKind::ate;
    double alpha = 0.0;  // mnar_mean
    int arm = 1;         // counterfactual_mean
    std::vector<HTerm> terms;
    std::vector<OutcomeSlot> slots;

    std::string name() const;
    // Outcome targets an outcome learner must fit, slot by slot.
    std::vector<FitTarget> outcome_targets() const;
    // Whether y must be finite on rows with A = a.
    bool reads_y(int a) const;
};

FunctionalDef make_functional(FunctionalKind kind, std::optional<double> alpha = std::nullopt, int arm = 1);
FunctionalDef make_functional(const RunConfig& cfg);

// The fits of one outcome learner for a functional, in outcome_targets() order.
struct OutcomeFit {
    std::vector<FittedNuisance> parts;
};

double outcome_slot_value(const FunctionalDef& def, std::size_t slot, const OutcomeFit& b, std::span<const double> x);

double h_transform(const FunctionalDef& def, const FittedNuisance& p, const OutcomeFit& b, const Observation& o);

// h-coefficients of a row set; they do not depend on nuisances, so one cache
// serves every (k, l) pair of a split.
struct HCache {
    std::size_t n = 0;
    std::vector<std::vector<double>> h1, h2, h3, h4;  // [term][row]

    static HCache build(const FunctionalDef& def, const Dataset& data, std::span<const std::size_t> rows);
};

// p(X) per term, b(X) per slot, over the rows of an HCache.
std::vector<std::vector<double>> propensity_arrays(const FunctionalDef& def, const FittedNuisance& p,
                                                   const Dataset& data, std::span<const std::size_t> rows);
std::vector<std::vector<double>> outcome_arrays(const FunctionalDef& def, const OutcomeFit& b, const Dataset& data,
                                                std::span<const std::size_t> rows);

// Mean of H over the cached rows. Throws EstimationError naming the term when
// the sum is not finite.
double psi_from_arrays(const FunctionalDef& def, const HCache& cache, const std::vector<std::vector<double>>& p_arrays,
                       const std::vector<std::vector<double>>& b_arrays);

// Root of P_validation IF(p, b, psi) = 0, i.e. the validation mean of H.
double estimate_psi(const FunctionalDef& def, const FittedNuisance& p, const OutcomeFit& b, const Dataset& data,
                    std::span<const std::size_t> validation);

// Per-row H values (for standard errors and checks).
std::vector<double> h_values(const FunctionalDef& def, const FittedNuisance& p, const OutcomeFit& b,
                             const Dataset& data, std::span<const std::size_t> rows);

// Checks that y is finite wherever the functional reads it.
void check_dataset(const FunctionalDef& def, const Dataset& data);

}  // namespace drselect::functionals

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drselect/core/dataset.hpp"
#include "drselect/core/splits.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/learners/library.hpp"

namespace drselect::selector {

// psi-hat^s_{k,l}, stored split-major then k then l.
struct PsiGrid {
    std::size_t S = 0;
    std::size_t K = 0;
    std::size_t L = 0;
    std::vector<double> values;
    std::vector<std::string> p_labels;
    std::vector<std::string> b_labels;

    PsiGrid() = default;
    PsiGrid(std::size_t s, std::size_t k, std::size_t l);

    double at(std::size_t s, std::size_t k, std::size_t l) const { return values[(s * K + k) * L + l]; }
    double& at(std::size_t s, std::size_t k, std::size_t l) { return values[(s * K + k) * L + l]; }
    // Split average (1/S) sum_s psi-hat^s_{k,l}.
    double mean(std::size_t k, std::size_t l) const;
    void check_finite() const;
};

// Tuning points chosen per split and learner, for refits that skip inner CV.
struct FrozenTuning {
    std::vector<std::vector<learners::TuningPoint>> propensity;            // [s][k]
    std::vector<std::vector<std::vector<learners::TuningPoint>>> outcome;  // [s][l][part]
};

// Fitted nuisances, S x (K + L); each outcome entry holds the functional's
// outcome targets.
struct NuisanceCache {
    std::vector<std::vector<learners::FittedNuisance>> propensity;  // [s][k]
    std::vector<std::vector<functionals::OutcomeFit>> outcome;      // [s][l]

    FrozenTuning tuning() const;
};

struct GridOptions {
    double M1 = 0.01;
    std::optional<double> M2;
    const FrozenTuning* frozen = nullptr;
};

struct GridFit {
    PsiGrid grid;
    NuisanceCache nuisances;
    std::size_t fits = 0;
};

std::uint64_t propensity_seed(std::uint64_t master, std::size_t s, std::size_t k);
std::uint64_t outcome_seed(std::uint64_t master, std::size_t s, std::size_t l, std::size_t part);

NuisanceCache fit_nuisances(const Dataset& data, const learners::CandidateLibrary& lib, const SplitScheme& splits,
                            const functionals::FunctionalDef& def, std::uint64_t seed, const GridOptions& options = {});

// values[s,k,l] = estimate_psi of (p-hat^s_k, b-hat^s_l) over `rows_of(s)`.
PsiGrid evaluate_grid(const NuisanceCache& cache, const functionals::FunctionalDef& def, const Dataset& data,
                      const std::vector<std::vector<std::size_t>>& rows_per_split);

GridFit fit_grid(const Dataset& data, const learners::CandidateLibrary& lib, const SplitScheme& splits,
                 const functionals::FunctionalDef& def, std::uint64_t seed, const GridOptions& options = {});

}  // namespace drselect::selector

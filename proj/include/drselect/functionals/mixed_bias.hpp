#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "drselect/core/dataset.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/learners/learner.hpp"

namespace drselect::functionals {

// Estimating function of a mixed-bias functional, fed the raw predictions of
// the two nuisance learners c and d.
struct MixedBiasPlugin {
    std::function<double(double c, double d, const Observation& o, double psi)> if_eval;
    // Set when if_eval is affine in psi with this slope; solved in closed form.
    std::optional<double> psi_slope;
    FitTarget c_target = FitTarget::propensity();
    FitTarget d_target = FitTarget::outcome(1);
    // Starting bracket for bisection. Defaults to mean +- 10 sd of if_eval at
    // psi = 0.
    std::optional<std::pair<double, double>> initial_bracket;
};

struct RootOptions {
    double tolerance = 1e-10;
    int max_expansions = 60;
};

// Root in psi of the mean of if_eval(c_i, d_i, O_i, psi) over the rows.
double solve_mixed_bias(const MixedBiasPlugin& plugin, std::span<const double> c, std::span<const double> d,
                        const Dataset& data, std::span<const std::size_t> rows, const RootOptions& options = {});

double solve_mixed_bias(const MixedBiasPlugin& plugin, const FittedNuisance& c, const FittedNuisance& d,
                        const Dataset& data, std::span<const std::size_t> validation,
                        const RootOptions& options = {});

// The missing-at-random mean written as a mixed-bias plugin (c = pi, d = b).
MixedBiasPlugin mar_mean_plugin();

}  // namespace drselect::functionals

#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "drselect/core/config.hpp"
#include "drselect/core/dataset.hpp"

namespace drselect::sim {

inline constexpr std::size_t kDgpDim = 5;

// Simulation design: X ~ Uniform(0,1)^5,
//   logit pr(A=1|X) = (1,-1,1,-1,1)' f(X),
//   E(Y|A,X) = 2 (1 + 1'f(X) + 1'f(X) A + A),  Y = E(Y|A,X) + N(0,1),
// with f_j(x) = 1 / (1 + exp(-20 (x_j - 0.5))).
struct DgpSpec {
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::array<double, kDgpDim> ps_coef{1.0, -1.0, 1.0, -1.0, 1.0};
    double outcome_scale = 2.0;
};

double bump(double xj);
double bump_sum(std::span<const double> x);
double true_propensity(std::span<const double> x);
double true_outcome(std::span<const double> x, int arm);
// E(Y|X) marginalised over A.
double true_marginal_outcome(std::span<const double> x);

Dataset generate(const DgpSpec& spec);

// Closed-form targets under the design: ate = 7, counterfactual_mean(1) = 14,
// counterfactual_mean(0) = 7. They rest on E f_j = 1/2, which holds because
// f_j is symmetric about x_j = 0.5 and X_j is uniform on the unit interval.
double true_psi(FunctionalKind kind, int arm = 1);

struct MonteCarloEstimate {
    double mean;
    double standard_error;
};

// Independent check of true_psi: averages the conditional-mean contrast over
// `draws` covariate draws.
MonteCarloEstimate monte_carlo_psi(FunctionalKind kind, int arm, std::size_t draws, std::uint64_t seed);

// Monte Carlo estimate of E[pr(A=1|X)].
MonteCarloEstimate monte_carlo_treatment_rate(std::size_t draws, std::uint64_t seed);

}  // namespace drselect::sim

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drselect/core/config.hpp"
#include "drselect/learners/library.hpp"

namespace drselect::sim {

// Bias amplitude scale * n^(-exponent); exponent 0 gives an inconsistent member.
struct Amplitude {
    double scale = 0.0;
    double exponent = 0.0;

    double at(std::size_t n) const;
};

// Learners equal to the true nuisance plus amplitude * direction(x), where
// direction is a random sign times 1 + u(x)/2 with |u| <= 1, drawn per rep.
struct SyntheticLearnerFamily {
    learners::Role role = learners::Role::propensity;
    std::vector<Amplitude> members;

    std::vector<learners::LearnerSpec> specs(std::size_t n, std::uint64_t direction_seed) const;
};

struct RatePlan {
    std::vector<std::size_t> n_grid{8000};
    std::size_t reps = 200;
    std::uint64_t seed = 0;
    FunctionalKind functional = FunctionalKind::counterfactual_mean;
    int arm = 1;
    std::size_t S = 3;
    double M1 = 0.01;
    std::size_t eval_size = 100000;
};

struct RatePoint {
    std::size_t n = 0;
    // Signed bias of the pair each selector picks, per rep. Oracle selectors
    // use the evaluation sample; bias is P_eval[H(p-hat, b-hat) - H(p, b)].
    std::vector<double> oracle_minimax;
    std::vector<double> oracle_mixed;
    std::vector<double> empirical_minimax;
    std::vector<double> empirical_mixed;

    double median_abs(const std::vector<double>& v) const;
};

std::vector<RatePoint> rate_experiment(const SyntheticLearnerFamily& p_family, const SyntheticLearnerFamily& b_family,
                                       const RatePlan& plan);

struct ExcessRiskPlan {
    std::size_t n = 1000;
    std::size_t reps = 200;
    std::uint64_t seed = 0;
    FunctionalKind functional = FunctionalKind::ate;
    int arm = 1;
    learners::CandidateLibrary library = learners::default_library();
    std::size_t S = 3;
    double M1 = 0.01;
    std::size_t eval_size = 100000;
    double floor = 1e-8;
};

struct ExcessRiskResult {
    // Per rep: oracle pseudo-risk at the empirically selected pair over the
    // smallest oracle pseudo-risk plus floor.
    std::vector<double> minimax_ratio;
    std::vector<double> mixed_ratio;
    std::size_t failures = 0;

    static double median(std::vector<double> v);
};

ExcessRiskResult excess_risk_experiment(const ExcessRiskPlan& plan);

}  // namespace drselect::sim

#pragma once

#include <cstdint>
#include <optional>

#include "drselect/core/dataset.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/learners/learner.hpp"

namespace drselect::sim {

struct DdmlOptions {
    double M1 = 0.01;
    std::optional<double> M2;
    double level = 0.95;
};

struct DdmlResult {
    double estimate = 0.0;
    double psi1 = 0.0;  // nuisances from the second half, evaluated on the first
    double psi2 = 0.0;
    // Influence-function standard error and the normal interval around it.
    double se = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Two-fold cross-fitting: psi_CF = (psi_1 + psi_2) / 2 with each half's
// nuisances fit on the complementary half.
DdmlResult ddml_crossfit(const Dataset& data, const learners::LearnerSpec& p_spec,
                         const learners::LearnerSpec& b_spec, const functionals::FunctionalDef& def,
                         std::uint64_t seed, const DdmlOptions& options = {});

// Two-sided standard normal critical value for a confidence level.
double normal_critical(double level);

}  // namespace drselect::sim

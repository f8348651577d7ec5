#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "drselect/core/config.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/learners/library.hpp"
#include "drselect/selector/pipeline.hpp"

namespace drselect::inference {

struct BootstrapResult {
    Criterion criterion = Criterion::minimax;
    double lo = 0.0;
    double hi = 0.0;
    double se = 0.0;
    double point = 0.0;
    std::size_t reps = 0;
    std::size_t dropped = 0;
    std::vector<double> replicates;  // psi-hat(tau) per kept resample, in resample order
};

struct BootstrapPlan {
    std::size_t reps = 200;
    double level = 0.95;
    // Refit tuning by inner CV in every resample instead of reusing the
    // original sample's per-split tuning points.
    bool retune = false;
    double max_drop_fraction = 0.10;
};

// Linear-interpolation sample quantile (R type 7) of sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q);

// Resamples n rows with replacement and reruns the whole pipeline (fresh
// splits, refits, grid, Gamma, weights) at the given tau per criterion.
// Returns one result per entry of `criteria`, with `point` the original
// sample's psi-hat(tau).
std::vector<BootstrapResult> bootstrap_ci(const Dataset& data, const learners::CandidateLibrary& lib,
                                          const functionals::FunctionalDef& def,
                                          const selector::PipelineOptions& options,
                                          const selector::SelectionReport& original,
                                          const std::vector<Criterion>& criteria, const std::vector<double>& taus,
                                          const BootstrapPlan& plan);

}  // namespace drselect::inference

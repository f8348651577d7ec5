#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "drselect/core/dataset.hpp"
#include "drselect/learners/tree.hpp"

namespace drselect::learners {

enum class BoostLoss { squared, bernoulli };

struct BoostParams {
    std::size_t ntrees = 100;
    int depth = 1;
    double shrinkage = 0.1;
    double bag_fraction = 0.5;
    std::size_t min_child_size = 10;
    std::size_t max_bins = 64;
};

// Stage-wise boosting of depth-limited trees on a random half of the rows per
// stage. Squared loss fits residuals; bernoulli takes Newton steps on the
// log-odds scale.
class GradientBoosting {
public:
    static GradientBoosting fit(const ColMatrix& X, std::span<const double> y, BoostLoss loss,
                                const BoostParams& params, std::uint64_t seed);

    // Raw score after the first `stages` trees (all trees when 0).
    double score(std::span<const double> x, std::size_t stages = 0) const;
    // Mean for squared loss, probability for bernoulli.
    double predict(std::span<const double> x, std::size_t stages = 0) const;
    // Stage-major evaluation of many rows; equal to predict() per row.
    void predict_many(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const;
    std::size_t stages() const noexcept { return trees_.size(); }

private:
    BoostLoss loss_ = BoostLoss::squared;
    double base_ = 0.0;
    double shrinkage_ = 0.1;
    std::vector<RegressionTree> trees_;
};

}  // namespace drselect::learners

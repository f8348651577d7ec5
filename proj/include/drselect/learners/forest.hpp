#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "drselect/core/dataset.hpp"
#include "drselect/learners/tree.hpp"

namespace drselect::learners {

struct ForestParams {
    std::size_t trees = 500;
    std::size_t min_node_size = 5;  // nodes of this size or smaller are not split
    std::size_t mtry = 0;           // 0: ceil(sqrt(p))
    std::size_t max_bins = 64;
};

// Bagged CART: each tree sees a bootstrap draw of n rows and samples mtry
// candidate features per node. Predictions average the leaf means, so a 0/1
// response yields class-1 probabilities.
class RandomForest {
public:
    static RandomForest fit(const ColMatrix& X, std::span<const double> y, const ForestParams& params,
                            std::uint64_t seed);

    double predict(std::span<const double> x) const;
    // Tree-major evaluation of many rows; equal to predict() per row.
    void predict_many(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const;
    std::size_t trees() const noexcept { return trees_.size(); }

private:
    std::vector<RegressionTree> trees_;
};

}  // namespace drselect::learners

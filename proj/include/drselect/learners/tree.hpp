#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "drselect/core/seed.hpp"
#include "drselect/learners/design.hpp"

namespace drselect::learners {

// Quantile binning of each feature into at most 255 bins. A value falls in
// bin b when thresholds[b-1] < value <= thresholds[b].
class BinnedMatrix {
public:
    BinnedMatrix(const ColMatrix& X, std::size_t max_bins);

    std::size_t n() const noexcept { return n_; }
    std::size_t p() const noexcept { return p_; }
    std::size_t bins(std::size_t j) const noexcept { return thresholds_[j].size() + 1; }
    std::uint8_t bin(std::size_t i, std::size_t j) const noexcept { return codes_[j * n_ + i]; }
    const std::uint8_t* column(std::size_t j) const noexcept { return codes_.data() + j * n_; }
    // Split value separating bin b from bin b+1.
    double threshold(std::size_t j, std::size_t b) const { return thresholds_[j][b]; }

private:
    std::size_t n_;
    std::size_t p_;
    std::vector<std::vector<double>> thresholds_;
    std::vector<std::uint8_t> codes_;
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    std::int32_t left = -1;
    std::int32_t right = -1;
    double threshold = 0.0;
    double value = 0.0;
};

class RegressionTree {
public:
    RegressionTree() = default;
    explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    double predict(std::span<const double> x) const;
    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

private:
    std::vector<TreeNode> nodes_;
};

struct TreeParams {
    int max_depth = -1;              // -1: unlimited
    std::size_t min_split_size = 2;  // nodes with fewer rows become leaves
    std::size_t min_child_size = 1;
    std::size_t mtry = 0;            // 0: all features
    double min_child_hessian = 0.0;
};

// Histogram split search maximising G_L^2/H_L + G_R^2/H_R - G^2/H; leaf
// values are G/H. With h = 1 and g = y this is the CART variance criterion
// (and the Gini criterion for 0/1 responses); with gradient/hessian pairs it
// is a Newton boosting step. `rows` may repeat indices (bootstrap draws).
class TreeGrower {
public:
    explicit TreeGrower(const BinnedMatrix& X);

    RegressionTree grow(std::span<const std::uint32_t> rows, std::span<const double> g, std::span<const double> h,
                        const TreeParams& params, Rng& rng);

private:
    const BinnedMatrix& X_;
    std::vector<double> hist_g_;
    std::vector<double> hist_h_;
    std::vector<std::uint32_t> hist_c_;
    std::vector<std::uint32_t> work_;
    std::vector<std::size_t> features_;
};

}  // namespace drselect::learners

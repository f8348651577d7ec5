#include "drselect/learners/tree.hpp"

#include <algorithm>
#include <cmath>

namespace drselect::learners {

BinnedMatrix::BinnedMatrix(const ColMatrix& X, std::size_t max_bins)
    : n_(X.n), p_(X.p), thresholds_(X.p), codes_(X.n * X.p, 0) {
    max_bins = std::clamp<std::size_t>(max_bins, 2, 255);
    std::vector<double> sorted;
    for (std::size_t j = 0; j < p_; ++j) {
        const auto col = X.col(j);
        sorted.assign(col.begin(), col.end());
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        auto& th = thresholds_[j];
        if (sorted.size() <= max_bins) {
            for (std::size_t k = 0; k + 1 < sorted.size(); ++k) th.push_back(0.5 * (sorted[k] + sorted[k + 1]));
        } else {
            std::vector<double> all(col.begin(), col.end());
            std::sort(all.begin(), all.end());
            for (std::size_t b = 1; b < max_bins; ++b) {
                const std::size_t pos = b * all.size() / max_bins;
                const double lo = all[pos - 1];
                const double hi = all[pos];
                const double cut = lo < hi ? 0.5 * (lo + hi) : lo;
                if (th.empty() || cut > th.back()) th.push_back(cut);
            }
            // the top bin must be non-empty
            while (!th.empty() && th.back() >= sorted.back()) th.pop_back();
        }
        std::uint8_t* out = codes_.data() + j * n_;
        for (std::size_t i = 0; i < n_; ++i) {
            out[i] = static_cast<std::uint8_t>(std::lower_bound(th.begin(), th.end(), col[i]) - th.begin());
        }
    }
}

double RegressionTree::predict(std::span<const double> x) const {
    std::int32_t k = 0;
    while (nodes_[k].feature >= 0) {
        const TreeNode& nd = nodes_[k];
        k = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes_[k].value;
}

TreeGrower::TreeGrower(const BinnedMatrix& X)
    : X_(X), hist_g_(256, 0.0), hist_h_(256, 0.0), hist_c_(256, 0), features_(X.p()) {}

namespace {

struct Pending {
    std::int32_t node;
    std::uint32_t begin;
    std::uint32_t end;
    int depth;
    double g;
    double h;
};

struct Split {
    double gain = 0.0;
    std::int32_t feature = -1;
    std::uint32_t bin = 0;
};

}  // namespace

RegressionTree TreeGrower::grow(std::span<const std::uint32_t> rows, std::span<const double> g,
                                std::span<const double> h, const TreeParams& params, Rng& rng) {
    std::vector<TreeNode> nodes;
    work_.assign(rows.begin(), rows.end());
    const std::size_t p = X_.p();
    const std::size_t mtry = params.mtry == 0 ? p : std::min(params.mtry, p);

    double g0 = 0.0;
    double h0 = 0.0;
    for (std::uint32_t i : work_) {
        g0 += g[i];
        h0 += h[i];
    }
    nodes.push_back(TreeNode{});
    std::vector<Pending> stack{{0, 0, static_cast<std::uint32_t>(work_.size()), 0, g0, h0}};

    while (!stack.empty()) {
        const Pending cur = stack.back();
        stack.pop_back();
        const std::size_t count = cur.end - cur.begin;
        nodes[cur.node].value = cur.h > 0.0 ? cur.g / cur.h : 0.0;
        const bool depth_ok = params.max_depth < 0 || cur.depth < params.max_depth;
        if (!depth_ok || count < params.min_split_size || count < 2 * params.min_child_size || !(cur.h > 0.0)) {
            continue;
        }

        // candidate features: partial Fisher-Yates
        for (std::size_t j = 0; j < p; ++j) features_[j] = j;
        if (mtry < p) {
            for (std::size_t k = 0; k < mtry; ++k) {
                const std::size_t pick = k + static_cast<std::size_t>(rng() % (p - k));
                std::swap(features_[k], features_[pick]);
            }
        }

        const double parent_score = cur.g * cur.g / cur.h;
        Split best;
        for (std::size_t k = 0; k < mtry; ++k) {
            const std::size_t j = features_[k];
            const std::uint8_t* codes = X_.column(j);
            std::uint32_t lo = 255;
            std::uint32_t hi = 0;
            for (std::uint32_t pos = cur.begin; pos < cur.end; ++pos) {
                const std::uint32_t i = work_[pos];
                const std::uint32_t b = codes[i];
                hist_g_[b] += g[i];
                hist_h_[b] += h[i];
                hist_c_[b] += 1;
                lo = std::min(lo, b);
                hi = std::max(hi, b);
            }
            double gl = 0.0;
            double hl = 0.0;
            std::size_t cl = 0;
            for (std::uint32_t b = lo; b < hi; ++b) {
                gl += hist_g_[b];
                hl += hist_h_[b];
                cl += hist_c_[b];
                if (hist_c_[b] == 0) continue;
                const std::size_t cr = count - cl;
                if (cl < params.min_child_size || cr < params.min_child_size) continue;
                const double hr = cur.h - hl;
                if (hl <= params.min_child_hessian || hr <= params.min_child_hessian) continue;
                const double gr = cur.g - gl;
                const double gain = gl * gl / hl + gr * gr / hr - parent_score;
                if (gain > best.gain) {
                    best.gain = gain;
                    best.feature = static_cast<std::int32_t>(j);
                    best.bin = b;
                }
            }
            for (std::uint32_t b = lo; b <= hi; ++b) {
                hist_g_[b] = 0.0;
                hist_h_[b] = 0.0;
                hist_c_[b] = 0;
            }
        }
        if (best.feature < 0 || best.gain <= 1e-12 * std::max(1.0, std::abs(parent_score))) continue;

        const std::uint8_t* codes = X_.column(static_cast<std::size_t>(best.feature));
        const auto mid_it = std::partition(work_.begin() + cur.begin, work_.begin() + cur.end,
                                           [&](std::uint32_t i) { return codes[i] <= best.bin; });
        const auto mid = static_cast<std::uint32_t>(mid_it - work_.begin());
        double gl = 0.0;
        double hl = 0.0;
        for (std::uint32_t pos = cur.begin; pos < mid; ++pos) {
            gl += g[work_[pos]];
            hl += h[work_[pos]];
        }
        const auto left = static_cast<std::int32_t>(nodes.size());
        nodes.push_back(TreeNode{});
        nodes.push_back(TreeNode{});
        TreeNode& parent = nodes[cur.node];
        parent.feature = best.feature;
        parent.threshold = X_.threshold(static_cast<std::size_t>(best.feature), best.bin);
        parent.left = left;
        parent.right = left + 1;
        stack.push_back({left + 1, mid, cur.end, cur.depth + 1, cur.g - gl, cur.h - hl});
        stack.push_back({left, cur.begin, mid, cur.depth + 1, gl, hl});
    }
    return RegressionTree(std::move(nodes));
}

}  // namespace drselect::learners

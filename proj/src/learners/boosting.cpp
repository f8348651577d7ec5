#include "drselect/learners/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace drselect::learners {

GradientBoosting GradientBoosting::fit(const ColMatrix& X, std::span<const double> y, BoostLoss loss,
                                       const BoostParams& params, std::uint64_t seed) {
    GradientBoosting model;
    model.loss_ = loss;
    model.shrinkage_ = params.shrinkage;
    const std::size_t n = X.n;
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    if (loss == BoostLoss::squared) {
        model.base_ = ybar;
    } else {
        const double p = std::clamp(ybar, 1e-6, 1.0 - 1e-6);
        model.base_ = std::log(p / (1.0 - p));
    }

    const BinnedMatrix binned(X, params.max_bins);
    TreeGrower grower(binned);
    TreeParams tp;
    tp.max_depth = params.depth;
    tp.min_child_size = params.min_child_size;
    tp.min_split_size = 2 * params.min_child_size;
    tp.min_child_hessian = loss == BoostLoss::bernoulli ? 1e-6 : 0.0;

    std::vector<double> f(n, model.base_), g(n), h(n, 1.0);
    std::vector<std::uint32_t> perm(n);
    std::vector<double> row(X.p);
    const std::size_t bag = std::max<std::size_t>(
        std::min(n, 2 * params.min_child_size), static_cast<std::size_t>(params.bag_fraction * static_cast<double>(n)));
    model.trees_.reserve(params.ntrees);
    for (std::size_t t = 0; t < params.ntrees; ++t) {
        Rng rng(derive_seed(seed, {seed_tag::tree, t}));
        std::iota(perm.begin(), perm.end(), 0U);
        for (std::size_t k = 0; k < bag; ++k) {
            const std::size_t pick = k + static_cast<std::size_t>(rng() % (n - k));
            std::swap(perm[k], perm[pick]);
        }
        if (loss == BoostLoss::squared) {
            for (std::size_t i = 0; i < n; ++i) g[i] = y[i] - f[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = 1.0 / (1.0 + std::exp(-f[i]));
                g[i] = y[i] - p;
                h[i] = std::max(p * (1.0 - p), 1e-12);
            }
        }
        RegressionTree tree = grower.grow(std::span<const std::uint32_t>(perm.data(), bag), g, h, tp, rng);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < X.p; ++j) row[j] = X.at(i, j);
            f[i] += params.shrinkage * tree.predict(row);
        }
        model.trees_.push_back(std::move(tree));
    }
    return model;
}

double GradientBoosting::score(std::span<const double> x, std::size_t stages) const {
    const std::size_t m = stages == 0 ? trees_.size() : std::min(stages, trees_.size());
    double s = base_;
    for (std::size_t t = 0; t < m; ++t) s += shrinkage_ * trees_[t].predict(x);
    return s;
}

double GradientBoosting::predict(std::span<const double> x, std::size_t stages) const {
    const double s = score(x, stages);
    return loss_ == BoostLoss::squared ? s : 1.0 / (1.0 + std::exp(-s));
}

void GradientBoosting::predict_many(const Dataset& data, std::span<const std::size_t> rows,
                                    std::span<double> out) const {
    std::fill(out.begin(), out.end(), base_);
    for (const auto& t : trees_)
        for (std::size_t k = 0; k < rows.size(); ++k) out[k] += shrinkage_ * t.predict(data.row(rows[k]));
    if (loss_ == BoostLoss::bernoulli)
        for (double& v : out) v = 1.0 / (1.0 + std::exp(-v));
}

}  // namespace drselect::learners

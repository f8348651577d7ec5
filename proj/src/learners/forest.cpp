#include "drselect/learners/forest.hpp"

#include <algorithm>
#include <cmath>

namespace drselect::learners {

RandomForest RandomForest::fit(const ColMatrix& X, std::span<const double> y, const ForestParams& params,
                               std::uint64_t seed) {
    RandomForest forest;
    const BinnedMatrix binned(X, params.max_bins);
    TreeGrower grower(binned);
    const std::vector<double> ones(X.n, 1.0);
    TreeParams tp;
    tp.min_split_size = params.min_node_size + 1;
    tp.min_child_size = 1;
    tp.mtry = params.mtry == 0 ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(X.p)))) : params.mtry;
    std::vector<std::uint32_t> draw(X.n);
    forest.trees_.reserve(params.trees);
    for (std::size_t t = 0; t < params.trees; ++t) {
        Rng rng(derive_seed(seed, {seed_tag::tree, t}));
        for (auto& r : draw) r = static_cast<std::uint32_t>(rng() % X.n);
        forest.trees_.push_back(grower.grow(draw, y, ones, tp, rng));
    }
    return forest;
}

double RandomForest::predict(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& t : trees_) s += t.predict(x);
    return s / static_cast<double>(trees_.size());
}

void RandomForest::predict_many(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& t : trees_)
        for (std::size_t k = 0; k < rows.size(); ++k) out[k] += t.predict(data.row(rows[k]));
    for (double& v : out) v /= static_cast<double>(trees_.size());
}

}  // namespace drselect::learners

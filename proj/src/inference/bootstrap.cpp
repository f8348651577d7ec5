#include "drselect/inference/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "drselect/core/error.hpp"
#include "drselect/core/parallel.hpp"
#include "drselect/core/seed.hpp"
#include "drselect/inference/smooth_max.hpp"

namespace drselect::inference {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ContractError("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<BootstrapResult> bootstrap_ci(const Dataset& data, const learners::CandidateLibrary& lib,
                                          const functionals::FunctionalDef& def,
                                          const selector::PipelineOptions& options,
                                          const selector::SelectionReport& original,
                                          const std::vector<Criterion>& criteria, const std::vector<double>& taus,
                                          const BootstrapPlan& plan) {
    if (plan.reps < 2) throw ContractError("bootstrap_ci requires at least 2 resamples");
    if (!(plan.level > 0.0 && plan.level < 1.0)) throw ContractError("bootstrap_ci: level must lie in (0, 1)");
    if (criteria.size() != taus.size()) throw ContractError("bootstrap_ci: one tau per criterion");

    const selector::FrozenTuning frozen = original.nuisances.tuning();
    const std::size_t n = data.n();
    const std::size_t C = criteria.size();
    std::vector<std::optional<std::vector<double>>> draws(plan.reps);

    parallel_for(plan.reps, [&](std::size_t r) {
        Rng rng(derive_seed(options.seed, {seed_tag::bootstrap, r}));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> rows(n);
        for (auto& i : rows) i = pick(rng);
        const Dataset resample = data.subset(rows);
        selector::PipelineOptions o = options;
        o.seed = derive_seed(options.seed, {seed_tag::bootstrap, r, 1});
        o.frozen = plan.retune ? nullptr : &frozen;
        try {
            const auto report = selector::run_selection(resample, lib, def, o);
            std::vector<double> values(C);
            for (std::size_t c = 0; c < C; ++c) values[c] = smooth_max(report.grid, taus[c], criteria[c]).psi_tau;
            draws[r] = std::move(values);
        } catch (const EstimationError&) {
        } catch (const ValidationError&) {
        }
    });

    std::size_t dropped = 0;
    for (const auto& d : draws) dropped += d ? 0 : 1;
    if (static_cast<double>(dropped) > plan.max_drop_fraction * static_cast<double>(plan.reps)) {
        throw EstimationError("bootstrap: " + std::to_string(dropped) + " of " + std::to_string(plan.reps) +
                                  " resamples failed",
                              "inference");
    }

    std::vector<BootstrapResult> out(C);
    const double alpha = 1.0 - plan.level;
    for (std::size_t c = 0; c < C; ++c) {
        BootstrapResult& b = out[c];
        b.criterion = criteria[c];
        b.reps = plan.reps;
        b.dropped = dropped;
        b.point = smooth_max(original.grid, taus[c], criteria[c]).psi_tau;
        for (const auto& d : draws)
            if (d) b.replicates.push_back((*d)[c]);
        std::vector<double> sorted = b.replicates;
        std::sort(sorted.begin(), sorted.end());
        b.lo = quantile_sorted(sorted, alpha / 2.0);
        b.hi = quantile_sorted(sorted, 1.0 - alpha / 2.0);
        double mean = 0.0;
        for (double v : b.replicates) mean += v;
        mean /= static_cast<double>(b.replicates.size());
        double ss = 0.0;
        for (double v : b.replicates) ss += (v - mean) * (v - mean);
        b.se = b.replicates.size() > 1 ? std::sqrt(ss / static_cast<double>(b.replicates.size() - 1)) : 0.0;
    }
    return out;
}

}  // namespace drselect::inference

#include "drselect/selector/psi_grid.hpp"

#include <cmath>

#include "drselect/core/error.hpp"
#include "drselect/core/parallel.hpp"
#include "drselect/core/seed.hpp"

namespace drselect::selector {

PsiGrid::PsiGrid(std::size_t s, std::size_t k, std::size_t l) : S(s), K(k), L(l), values(s * k * l, 0.0) {}

double PsiGrid::mean(std::size_t k, std::size_t l) const {
    double total = 0.0;
    for (std::size_t s = 0; s < S; ++s) total += at(s, k, l);
    return total / static_cast<double>(S);
}

void PsiGrid::check_finite() const {
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < L; ++l)
                if (!std::isfinite(at(s, k, l))) {
                    throw EstimationError("psi grid entry (" + std::to_string(s) + "," + std::to_string(k) + "," +
                                              std::to_string(l) + ") is not finite",
                                          "evaluation");
                }
}

FrozenTuning NuisanceCache::tuning() const {
    FrozenTuning t;
    t.propensity.resize(propensity.size());
    t.outcome.resize(outcome.size());
    for (std::size_t s = 0; s < propensity.size(); ++s)
        for (const auto& p : propensity[s]) t.propensity[s].push_back(p.tuning);
    for (std::size_t s = 0; s < outcome.size(); ++s) {
        for (const auto& b : outcome[s]) {
            std::vector<learners::TuningPoint> parts;
            for (const auto& part : b.parts) parts.push_back(part.tuning);
            t.outcome[s].push_back(std::move(parts));
        }
    }
    return t;
}

std::uint64_t propensity_seed(std::uint64_t master, std::size_t s, std::size_t k) {
    return derive_seed(master, {seed_tag::fit_propensity, s, k});
}

std::uint64_t outcome_seed(std::uint64_t master, std::size_t s, std::size_t l, std::size_t part) {
    return derive_seed(master, {seed_tag::fit_outcome, s, l, part});
}

NuisanceCache fit_nuisances(const Dataset& data, const learners::CandidateLibrary& lib, const SplitScheme& splits,
                            const functionals::FunctionalDef& def, std::uint64_t seed, const GridOptions& options) {
    lib.validate();
    const std::size_t S = splits.splits();
    const std::size_t K = lib.K();
    const std::size_t L = lib.L();
    const auto targets = def.outcome_targets();
    const std::size_t parts = targets.size();

    NuisanceCache cache;
    cache.propensity.assign(S, std::vector<learners::FittedNuisance>(K));
    cache.outcome.assign(S, std::vector<functionals::OutcomeFit>(L));
    for (auto& row : cache.outcome)
        for (auto& b : row) b.parts.resize(parts);

    std::vector<std::vector<std::size_t>> training(S);
    for (std::size_t s = 0; s < S; ++s) training[s] = splits.training_rows(s);

    // One task per (split, propensity learner) and (split, outcome learner, target).
    const std::size_t per_split = K + L * parts;
    parallel_for(S * per_split, [&](std::size_t task) {
        const std::size_t s = task / per_split;
        const std::size_t j = task % per_split;
        learners::FitOptions fo;
        fo.M1 = options.M1;
        fo.M2 = options.M2;
        fo.split = s;
        try {
            if (j < K) {
                if (options.frozen) fo.fixed_tuning = options.frozen->propensity.at(s).at(j);
                cache.propensity[s][j] = learners::fit(lib.propensity[j], data, training[s],
                                                       learners::FitTarget::propensity(), propensity_seed(seed, s, j), fo);
            } else {
                const std::size_t l = (j - K) / parts;
                const std::size_t part = (j - K) % parts;
                if (options.frozen) fo.fixed_tuning = options.frozen->outcome.at(s).at(l).at(part);
                cache.outcome[s][l].parts[part] = learners::fit(lib.outcome[l], data, training[s], targets[part],
                                                                outcome_seed(seed, s, l, part), fo);
            }
        } catch (const FitError& e) {
            const std::string who = j < K ? "propensity learner " + std::to_string(j)
                                          : "outcome learner " + std::to_string((j - K) / parts);
            throw FitError("split " + std::to_string(s) + ", " + who + ": " + e.what());
        }
    });
    return cache;
}

PsiGrid evaluate_grid(const NuisanceCache& cache, const functionals::FunctionalDef& def, const Dataset& data,
                      const std::vector<std::vector<std::size_t>>& rows_per_split) {
    const std::size_t S = cache.propensity.size();
    const std::size_t K = S ? cache.propensity[0].size() : 0;
    const std::size_t L = S ? cache.outcome[0].size() : 0;
    PsiGrid grid(S, K, L);
    if (rows_per_split.size() != S) throw ContractError("evaluate_grid: one row set per split required");

    parallel_for(S, [&](std::size_t s) {
        const auto& rows = rows_per_split[s];
        const auto hcache = functionals::HCache::build(def, data, rows);
        std::vector<std::vector<std::vector<double>>> b_arrays(L);
        for (std::size_t l = 0; l < L; ++l) b_arrays[l] = functionals::outcome_arrays(def, cache.outcome[s][l], data, rows);
        for (std::size_t k = 0; k < K; ++k) {
            const auto p_arrays = functionals::propensity_arrays(def, cache.propensity[s][k], data, rows);
            for (std::size_t l = 0; l < L; ++l) {
                grid.at(s, k, l) = functionals::psi_from_arrays(def, hcache, p_arrays, b_arrays[l]);
            }
        }
    });
    return grid;
}

GridFit fit_grid(const Dataset& data, const learners::CandidateLibrary& lib, const SplitScheme& splits,
                 const functionals::FunctionalDef& def, std::uint64_t seed, const GridOptions& options) {
    if (splits.n() != data.n()) throw ContractError("fit_grid: split scheme size does not match the data");
    GridFit out;
    out.nuisances = fit_nuisances(data, lib, splits, def, seed, options);
    out.fits = splits.splits() * (lib.K() + lib.L());
    std::vector<std::vector<std::size_t>> validation(splits.splits());
    for (std::size_t s = 0; s < splits.splits(); ++s) validation[s] = splits.validation_rows(s);
    out.grid = evaluate_grid(out.nuisances, def, data, validation);
    for (const auto& spec : lib.propensity) out.grid.p_labels.push_back(spec.label);
    for (const auto& spec : lib.outcome) out.grid.b_labels.push_back(spec.label);
    out.grid.check_finite();
    return out;
}

}  // namespace drselect::selector

#include "drselect/simulation/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drselect/core/error.hpp"
#include "drselect/core/parallel.hpp"
#include "drselect/core/seed.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/inference/bootstrap.hpp"
#include "drselect/selector/oracle.hpp"
#include "drselect/selector/pipeline.hpp"
#include "drselect/simulation/dgp.hpp"

namespace drselect::sim {

double Amplitude::at(std::size_t n) const { return scale * std::pow(static_cast<double>(n), -exponent); }

std::vector<learners::LearnerSpec> SyntheticLearnerFamily::specs(std::size_t n, std::uint64_t direction_seed) const {
    std::vector<learners::LearnerSpec> out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        auto spec = learners::default_spec(learners::Family::oracle_sim, role,
                                           "synthetic_" + std::string(learners::to_string(role)).substr(0, 1) + "_" +
                                               std::to_string(i + 1));
        // direction 0 means "no perturbation shape"; keep seeds nonzero.
        const double dir = static_cast<double>((derive_seed(direction_seed, {i}) >> 12) | 1u);
        spec.set_dimension("bias", {members[i].at(n)});
        spec.set_dimension("direction", {dir});
        out.push_back(std::move(spec));
    }
    return out;
}

double RatePoint::median_abs(const std::vector<double>& v) const {
    std::vector<double> a;
    for (double x : v) a.push_back(std::abs(x));
    std::sort(a.begin(), a.end());
    return inference::quantile_sorted(a, 0.5);
}

namespace {

// P_eval[H(p-hat^s_k, b-hat^s_l) - H(p, b)] averaged over splits.
double pair_bias(const selector::PsiGrid& oracle_grid, std::size_t k, std::size_t l, double truth_on_eval) {
    return oracle_grid.mean(k, l) - truth_on_eval;
}

}  // namespace

std::vector<RatePoint> rate_experiment(const SyntheticLearnerFamily& p_family, const SyntheticLearnerFamily& b_family,
                                       const RatePlan& plan) {
    if (p_family.role != learners::Role::propensity || b_family.role != learners::Role::outcome) {
        throw ContractError("rate_experiment: families must be propensity then outcome");
    }
    if (p_family.members.empty() || b_family.members.empty()) throw ContractError("rate_experiment: empty family");
    const auto def = functionals::make_functional(plan.functional, std::nullopt, plan.arm);
    std::vector<RatePoint> out;
    for (std::size_t ni = 0; ni < plan.n_grid.size(); ++ni) {
        const std::size_t n = plan.n_grid[ni];
        RatePoint point;
        point.n = n;
        point.oracle_minimax.assign(plan.reps, 0.0);
        point.oracle_mixed.assign(plan.reps, 0.0);
        point.empirical_minimax.assign(plan.reps, 0.0);
        point.empirical_mixed.assign(plan.reps, 0.0);
        parallel_for(plan.reps, [&](std::size_t rep) {
            const std::uint64_t rep_seed = derive_seed(plan.seed, {seed_tag::replicate, n, rep});
            learners::CandidateLibrary lib;
            lib.propensity = p_family.specs(n, derive_seed(rep_seed, {seed_tag::synthetic, 0}));
            lib.outcome = b_family.specs(n, derive_seed(rep_seed, {seed_tag::synthetic, 1}));
            const Dataset data = generate(DgpSpec{n, derive_seed(rep_seed, {seed_tag::synthetic, 2})});
            const Dataset eval = generate(DgpSpec{plan.eval_size, derive_seed(rep_seed, {seed_tag::evaluation})});

            selector::PipelineOptions o;
            o.S = plan.S;
            o.seed = rep_seed;
            o.M1 = plan.M1;
            const auto sel = selector::run_selection(data, lib, def, o);
            const auto oracle = selector::oracle_select(sel.nuisances, eval, def);

            // H at the true nuisances on the same evaluation rows.
            learners::CandidateLibrary truth_lib;
            truth_lib.propensity = {learners::default_spec(learners::Family::oracle_sim, learners::Role::propensity)};
            truth_lib.outcome = {learners::default_spec(learners::Family::oracle_sim, learners::Role::outcome)};
            const auto truth_cache = selector::fit_nuisances(data, truth_lib, sel.splits, def, rep_seed);
            const auto rows = all_rows(eval.n());
            const std::vector<std::vector<std::size_t>> per_split(sel.splits.splits(), rows);
            const auto truth_grid = selector::evaluate_grid(truth_cache, def, eval, per_split);
            const double truth_on_eval = truth_grid.at(0, 0, 0);

            point.oracle_minimax[rep] = pair_bias(oracle.grid, oracle.minimax.k, oracle.minimax.l, truth_on_eval);
            point.oracle_mixed[rep] = pair_bias(oracle.grid, oracle.mixed.k, oracle.mixed.l, truth_on_eval);
            point.empirical_minimax[rep] =
                pair_bias(oracle.grid, sel.minimax.selection.k, sel.minimax.selection.l, truth_on_eval);
            point.empirical_mixed[rep] =
                pair_bias(oracle.grid, sel.mixed.selection.k, sel.mixed.selection.l, truth_on_eval);
        });
        out.push_back(std::move(point));
    }
    return out;
}

double ExcessRiskResult::median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    return inference::quantile_sorted(v, 0.5);
}

ExcessRiskResult excess_risk_experiment(const ExcessRiskPlan& plan) {
    const auto def = functionals::make_functional(plan.functional, std::nullopt, plan.arm);
    std::vector<double> mm(plan.reps, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> mx(plan.reps, std::numeric_limits<double>::quiet_NaN());
    parallel_for(plan.reps, [&](std::size_t rep) {
        const std::uint64_t rep_seed = derive_seed(plan.seed, {seed_tag::replicate, rep});
        const Dataset data = generate(DgpSpec{plan.n, derive_seed(rep_seed, {seed_tag::synthetic})});
        const Dataset eval = generate(DgpSpec{plan.eval_size, derive_seed(rep_seed, {seed_tag::evaluation})});
        selector::PipelineOptions o;
        o.S = plan.S;
        o.seed = rep_seed;
        o.M1 = plan.M1;
        try {
            const auto sel = selector::run_selection(data, plan.library, def, o);
            const auto oracle = selector::oracle_select(sel.nuisances, eval, def);
            const auto ratio = [&](Criterion c) {
                const auto& m = oracle.surface.matrix(c);
                const auto& chosen = sel.choice(c).selection;
                return m[chosen.k * oracle.surface.L + chosen.l] / (oracle.choice(c).risk + plan.floor);
            };
            mm[rep] = ratio(Criterion::minimax);
            mx[rep] = ratio(Criterion::mixed_minimax);
        } catch (const EstimationError&) {
        }
    });
    ExcessRiskResult r;
    for (std::size_t i = 0; i < plan.reps; ++i) {
        if (std::isnan(mm[i])) {
            ++r.failures;
            continue;
        }
        r.minimax_ratio.push_back(mm[i]);
        r.mixed_ratio.push_back(mx[i]);
    }
    return r;
}

}  // namespace drselect::sim

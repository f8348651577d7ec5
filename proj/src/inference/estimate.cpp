#include "drselect/inference/estimate.hpp"

#include "drselect/functionals/functional.hpp"

namespace drselect::inference {

std::vector<Criterion> expand_criterion(Criterion c) {
    if (c == Criterion::both) return {Criterion::minimax, Criterion::mixed_minimax};
    return {c};
}

TauChoice resolve_tau(const RunConfig& cfg, std::size_t K, std::size_t L, Criterion criterion) {
    if (cfg.tau) {
        TauChoice t;
        t.tau = std::min(*cfg.tau, kMaxTau);
        t.capped = *cfg.tau > kMaxTau;
        t.m = term_count(K, L, criterion);
        return t;
    }
    if (cfg.epsilon) return choose_tau(term_count(K, L, criterion), *cfg.epsilon);
    TauChoice t;
    t.tau = default_tau(K, L);
    t.m = term_count(K, L, criterion);
    t.defaulted = true;
    return t;
}

EstimateReport run_estimate(const Dataset& data, const learners::CandidateLibrary& lib, const RunConfig& cfg,
                            const BootstrapPlan& plan) {
    cfg.validate();
    const auto def = functionals::make_functional(cfg);
    const auto options = selector::pipeline_options(cfg);
    EstimateReport report;
    report.selection = selector::run_selection(data, lib, def, options);

    const auto criteria = expand_criterion(cfg.criterion);
    std::vector<double> taus;
    for (Criterion c : criteria) {
        CriterionEstimate e;
        e.criterion = c;
        const auto& choice = report.selection.choice(c);
        e.selection = choice.selection;
        e.estimate = choice.estimate;
        e.tau = resolve_tau(cfg, lib.K(), lib.L(), c);
        if (e.tau.defaulted && !cfg.tau && !cfg.epsilon) {
            report.notes.push_back("tau not configured; using log(K*L)");
        } else if (e.tau.defaulted) {
            report.notes.push_back("single-term smooth max; tau set to 1");
        }
        if (e.tau.capped) report.notes.push_back("tau capped at 1e8");
        e.smooth = smooth_max(report.selection.grid, e.tau.tau, c);
        taus.push_back(e.tau.tau);
        report.criteria.push_back(std::move(e));
    }

    if (cfg.bootstrap_reps > 0) {
        BootstrapPlan p = plan;
        p.reps = cfg.bootstrap_reps;
        p.level = cfg.level;
        auto boot = bootstrap_ci(data, lib, def, options, report.selection, criteria, taus, p);
        for (std::size_t c = 0; c < criteria.size(); ++c) report.criteria[c].bootstrap = std::move(boot[c]);
    }
    return report;
}

}  // namespace drselect::inference

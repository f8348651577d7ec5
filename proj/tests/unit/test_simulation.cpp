#include <doctest.h>

#include <cmath>
#include <numeric>

#include "drselect/core/seed.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/learners/library.hpp"
#include "drselect/selector/pseudo_risk.hpp"
#include "drselect/selector/psi_grid.hpp"
#include "drselect/simulation/ddml.hpp"
#include "drselect/simulation/dgp.hpp"
#include "drselect/simulation/experiment.hpp"
#include "drselect/simulation/rates.hpp"

using namespace drselect;
using namespace drselect::sim;
using learners::Family;
using learners::Role;

namespace {

learners::CandidateLibrary oracle_library() {
    learners::CandidateLibrary lib;
    lib.propensity = {learners::default_spec(Family::oracle_sim, Role::propensity)};
    lib.outcome = {learners::default_spec(Family::oracle_sim, Role::outcome)};
    return lib;
}

}  // namespace

TEST_CASE("dgp: plug-in values at the centre") {
    const std::vector<double> c(5, 0.5);
    CHECK(true_propensity(c) == doctest::Approx(1.0 / (1.0 + std::exp(-0.5))));
    CHECK(true_outcome(c, 1) == doctest::Approx(14.0));
    CHECK(true_outcome(c, 0) == doctest::Approx(7.0));
    CHECK(bump(0.5) == 0.5);
}

TEST_CASE("dgp: deterministic given the seed") {
    const Dataset a = generate({100, 3});
    const Dataset b = generate({100, 3});
    const Dataset c = generate({100, 4});
    CHECK(std::equal(a.x_data().begin(), a.x_data().end(), b.x_data().begin()));
    CHECK(std::equal(a.y_data().begin(), a.y_data().end(), b.y_data().begin()));
    CHECK_FALSE(std::equal(a.y_data().begin(), a.y_data().end(), c.y_data().begin()));
    CHECK(a.d() == 5);
}

TEST_CASE("dgp: closed-form targets agree with a Monte Carlo oracle") {
    CHECK(true_psi(FunctionalKind::ate) == 7.0);
    CHECK(true_psi(FunctionalKind::counterfactual_mean, 1) == 14.0);
    CHECK(true_psi(FunctionalKind::counterfactual_mean, 0) == 7.0);
    CHECK(true_psi(FunctionalKind::counterfactual_mean, 1) - true_psi(FunctionalKind::counterfactual_mean, 0) ==
          true_psi(FunctionalKind::ate));
    for (auto [kind, arm] : {std::pair{FunctionalKind::ate, 1}, std::pair{FunctionalKind::counterfactual_mean, 1},
                             std::pair{FunctionalKind::counterfactual_mean, 0}}) {
        const auto mc = monte_carlo_psi(kind, arm, 10'000'000, 77);
        CHECK(std::abs(mc.mean - true_psi(kind, arm)) <= 3.0 * mc.standard_error);
    }
}

TEST_CASE("dgp: treatment rate over a million rows") {
    const Dataset d = generate({1'000'000, 5});
    const double mean_a = std::accumulate(d.a_data().begin(), d.a_data().end(), 0.0) / 1e6;
    const auto mc = monte_carlo_treatment_rate(10'000'000, 6);
    CHECK(std::abs(mean_a - mc.mean) <= 0.005);
}

TEST_CASE("ddml: constant learners reproduce the full-sample mean of H") {
    const Dataset d = generate({400, 8});
    const auto def = functionals::make_functional(FunctionalKind::expected_product);
    const auto p = learners::default_spec(Family::constant, Role::propensity);
    const auto b = learners::default_spec(Family::constant, Role::outcome);
    const auto r = ddml_crossfit(d, p, b, def, 3);
    CHECK(r.estimate == doctest::Approx((r.psi1 + r.psi2) / 2.0));
    CHECK(r.lo <= r.estimate);
    CHECK(r.hi >= r.estimate);
    CHECK(normal_critical(0.95) == doctest::Approx(1.959964).epsilon(1e-6));
}

TEST_CASE("ddml: equals the K=L=1 selector on the same complementary halves") {
    const Dataset d = generate({600, 9});
    const auto def = functionals::make_functional(FunctionalKind::ate);
    auto p = learners::default_spec(Family::l1_logistic, Role::propensity);
    p.set_dimension("lambda", {0.01});
    auto b = learners::default_spec(Family::l1_linear, Role::outcome);
    b.set_dimension("lambda", {0.01});
    const std::uint64_t seed = 11;
    const auto r = ddml_crossfit(d, p, b, def, seed);
    learners::CandidateLibrary lib;
    lib.propensity = {p};
    lib.outcome = {b};
    const auto halves = make_splits(d.n(), 2, SplitKind::vfold, derive_seed(seed, {seed_tag::ddml}));
    const auto fit = selector::fit_grid(d, lib, halves, def, 1);
    CHECK(selector::final_estimate(fit.grid, 0, 0) == doctest::Approx(r.estimate).epsilon(1e-12));
}

TEST_CASE("experiment: oracle-only library, one rep") {
    ExperimentPlan plan;
    plan.n = 4000;
    plan.reps = 1;
    plan.seed = 3;
    plan.library = oracle_library();
    plan.methods = parse_methods("minimax,mixed_minimax");
    const auto report = run_experiment(plan);
    CHECK(report.truth == 7.0);
    for (const char* m : {"minimax", "mixed_minimax"}) CHECK(std::abs(report.summary(m).mean_bias) < 0.5);
    CHECK(report.summary("mixed_minimax").relative_abs_bias == doctest::Approx(1.0));
    CHECK(table2_csv(report).rfind("method,L,U,W,C", 0) == 0);
}

TEST_CASE("experiment: summaries") {
    const auto methods = parse_methods("minimax,mixed_minimax,ddml_l1");
    CHECK(methods[2].kind == MethodKind::ddml);
    CHECK_THROWS(parse_method("bogus"));
    std::vector<RepRecord> recs(4);
    const double nan = std::nan("");
    for (std::size_t r = 0; r < 4; ++r) {
        recs[r].rep = r;
        recs[r].estimate = {7.0 + 0.5 * static_cast<double>(r), 7.0 - 0.25 * static_cast<double>(r), 7.0};
        recs[r].lo = {6.0, 7.5, nan};
        recs[r].hi = {9.0, 8.0, nan};
    }
    const auto s = summarize(methods, recs, 7.0);
    CHECK(s[1].relative_abs_bias == 1.0);
    CHECK(s[0].mean_bias == doctest::Approx(0.75));
    CHECK(s[0].relative_abs_bias == doctest::Approx(2.0));
    CHECK(s[0].coverage == 1.0);
    CHECK(s[1].lower_error == 1.0);
    CHECK(s[1].mean_width == doctest::Approx(0.5));
    CHECK_FALSE(s[2].has_interval);
}

TEST_CASE("rates: zero amplitudes give zero bias") {
    RatePlan plan;
    plan.n_grid = {600};
    plan.reps = 3;
    plan.eval_size = 3000;
    plan.seed = 5;
    const SyntheticLearnerFamily p{Role::propensity, {{0.0, 0.0}, {0.0, 0.0}}};
    const SyntheticLearnerFamily b{Role::outcome, {{0.0, 0.0}, {0.0, 0.0}}};
    const auto points = rate_experiment(p, b, plan);
    REQUIRE(points.size() == 1);
    for (const auto* v : {&points[0].oracle_minimax, &points[0].oracle_mixed}) {
        REQUIRE(v->size() == 3);
        for (double x : *v) CHECK(std::abs(x) < 1e-12);
    }
}

TEST_CASE("rates: single-member families make the selectors coincide") {
    RatePlan plan;
    plan.n_grid = {500};
    plan.reps = 3;
    plan.eval_size = 3000;
    plan.seed = 6;
    const SyntheticLearnerFamily p{Role::propensity, {{0.3, 0.25}}};
    const SyntheticLearnerFamily b{Role::outcome, {{0.5, 0.25}}};
    const auto points = rate_experiment(p, b, plan);
    CHECK(points[0].oracle_minimax == points[0].oracle_mixed);
    CHECK(points[0].empirical_minimax == points[0].empirical_mixed);
    CHECK(Amplitude{2.0, 0.5}.at(400) == doctest::Approx(0.1));
}

TEST_CASE("excess risk: oracle-only library") {
    ExcessRiskPlan plan;
    plan.n = 300;
    plan.reps = 2;
    plan.eval_size = 2000;
    plan.library = oracle_library();
    const auto r = excess_risk_experiment(plan);
    REQUIRE(r.mixed_ratio.size() == 2);
    // a single pair has a zero surface, so the ratio is 0 / floor
    for (double v : r.mixed_ratio) CHECK(v == 0.0);
    CHECK(ExcessRiskResult::median({3.0, 1.0, 2.0, 10.0}) == doctest::Approx(2.5));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "drselect/core/error.hpp"
#include "drselect/core/parallel.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/inference/bootstrap.hpp"
#include "drselect/inference/estimate.hpp"
#include "drselect/inference/smooth_max.hpp"
#include "drselect/learners/library.hpp"
#include "drselect/selector/pipeline.hpp"
#include "drselect/selector/pseudo_risk.hpp"

using namespace drselect;
using namespace drselect::inference;
using selector::PsiGrid;

namespace {

PsiGrid random_grid(std::mt19937_64& rng, std::size_t S, std::size_t K, std::size_t L) {
    std::normal_distribution<double> z(0.0, 1.0);
    PsiGrid g(S, K, L);
    for (double& v : g.values) v = z(rng);
    return g;
}

double hard(const selector::PseudoRiskSurface& s, Criterion c, std::size_t k, std::size_t l) {
    return c == Criterion::minimax ? s.b1_at(k, l) : s.b2_at(k, l);
}

}  // namespace

TEST_CASE("gamma_smooth: flat grids give log(m)/tau") {
    PsiGrid g(2, 3, 3);
    std::fill(g.values.begin(), g.values.end(), 0.7);
    for (double tau : {0.5, 1.0, 4.0}) {
        CHECK(gamma_smooth(g, 1, 2, tau, Criterion::minimax) == doctest::Approx(std::log(5.0) / tau));
        CHECK(gamma_smooth(g, 0, 0, tau, Criterion::mixed_minimax) == doctest::Approx(2.0 * std::log(9.0) / tau));
    }
    CHECK_THROWS_AS(gamma_smooth(g, 0, 0, 0.0, Criterion::minimax), ContractError);
    CHECK(term_count(3, 3, Criterion::minimax) == 5);
    CHECK(term_count(3, 3, Criterion::mixed_minimax) == 81);
}

TEST_CASE("gamma_smooth: sandwich, monotone approximation and the large-tau limit") {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        const PsiGrid g = random_grid(rng, 3, 3, 4);
        const auto surface = selector::compute_surface(g);
        for (Criterion c : {Criterion::minimax, Criterion::mixed_minimax}) {
            const double logm = std::log(static_cast<double>(term_count(3, 4, c)));
            for (std::size_t k = 0; k < 3; ++k) {
                for (std::size_t l = 0; l < 4; ++l) {
                    const double b = hard(surface, c, k, l);
                    double prev = std::numeric_limits<double>::infinity();
                    for (double tau : {0.1, 1.0, 10.0, 100.0}) {
                        const double gm = gamma_smooth(g, k, l, tau, c);
                        CHECK(gm >= b - 1e-12);
                        CHECK(gm <= b + logm / tau + 1e-12);
                        CHECK(gm <= prev + 1e-12);
                        prev = gm;
                    }
                    CHECK(std::abs(gamma_smooth(g, k, l, 1e6, c) - b) <= 1e-5);
                }
            }
        }
    }
}

TEST_CASE("smooth_weights examples and invariants") {
    const std::vector<double> flat(6, 2.0);
    for (double w : smooth_weights(flat, 3.0)) CHECK(w == doctest::Approx(1.0 / 6.0));
    const auto w = smooth_weights(std::vector<double>{0.0, std::log(2.0)}, 1.0);
    CHECK(w[0] == doctest::Approx(2.0 / 3.0));
    CHECK(w[1] == doctest::Approx(1.0 / 3.0));

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> gm(9);
        for (double& v : gm) v = u(rng);
        auto shifted = gm;
        for (double& v : shifted) v += 123.0;
        const auto a = smooth_weights(gm, 2.0);
        const auto b = smooth_weights(shifted, 2.0);
        CHECK(std::accumulate(a.begin(), a.end(), 0.0) == doctest::Approx(1.0));
        for (std::size_t i = 0; i < 9; ++i) {
            CHECK(a[i] >= 0.0);
            CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("smooth_psi examples and concentration") {
    PsiGrid g(1, 1, 2);
    g.values = {1.0, 3.0};
    CHECK(smooth_psi(std::vector<double>{0.5, 0.5}, g) == doctest::Approx(2.0));
    CHECK(smooth_psi(std::vector<double>{0.0, 1.0}, g) == 3.0);

    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const PsiGrid r = random_grid(rng, 3, 3, 3);
        const auto surface = selector::compute_surface(r);
        for (Criterion c : {Criterion::minimax, Criterion::mixed_minimax}) {
            const auto sel = selector::select(surface, c);
            if (sel.ties != 0) continue;
            const auto res = smooth_max(r, 1e6, c);
            CHECK(std::abs(res.psi_tau - selector::final_estimate(r, sel.k, sel.l)) <= 1e-6);
        }
    }
}

TEST_CASE("choose_tau examples") {
    CHECK(choose_tau(5, 0.1).tau == doctest::Approx(16.0944).epsilon(1e-4));
    CHECK(choose_tau(9, std::log(9.0)).tau == doctest::Approx(1.0));
    const auto one = choose_tau(1, 0.1);
    CHECK(one.defaulted);
    CHECK(one.tau == 1.0);
    CHECK(choose_tau(9, 1e-12).capped);
    CHECK(choose_tau(9, 1e-12).tau == kMaxTau);
    CHECK(default_tau(3, 3) == doctest::Approx(std::log(9.0)));
    CHECK(default_tau(1, 1) == 1.0);
}

TEST_CASE("quantile_sorted matches type 7") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 4.0);
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("bootstrap: constant outcome and constant learners give a degenerate interval") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 60;
    std::vector<double> x(n);
    std::vector<std::uint8_t> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = u(rng);
        a[i] = i % 2;
    }
    const Dataset d(std::move(x), std::move(a), std::vector<double>(n, 2.5), 1);
    learners::CandidateLibrary lib;
    lib.propensity = {learners::default_spec(learners::Family::constant, learners::Role::propensity)};
    lib.outcome = {learners::default_spec(learners::Family::constant, learners::Role::outcome)};
    RunConfig cfg;
    cfg.functional = FunctionalKind::mar_mean;
    cfg.bootstrap_reps = 30;
    cfg.seed = 8;
    BootstrapPlan plan;
    plan.reps = 30;
    const auto report = run_estimate(d, lib, cfg, plan);
    REQUIRE(report.criteria.size() == 2);
    for (const auto& c : report.criteria) {
        CHECK(c.estimate == doctest::Approx(2.5));
        CHECK(c.smooth.psi_tau == doctest::Approx(2.5));
        REQUIRE(c.bootstrap.has_value());
        CHECK(c.bootstrap->lo == doctest::Approx(2.5));
        CHECK(c.bootstrap->hi == doctest::Approx(2.5));
        CHECK(c.bootstrap->se == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(c.bootstrap->reps == 30);
    }
}

TEST_CASE("bootstrap: reproducible and independent of the worker cap") {
    const std::size_t n = 80;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> x(n), y(n);
    std::vector<std::uint8_t> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = z(rng);
        a[i] = z(rng) + 0.3 * x[i] > 0 ? 1 : 0;
        y[i] = 1.0 + x[i] + z(rng);
    }
    const Dataset d(std::move(x), std::move(a), std::move(y), 1);
    learners::CandidateLibrary lib;
    auto lasso_p = learners::default_spec(learners::Family::l1_logistic, learners::Role::propensity);
    lasso_p.set_dimension("lambda", {0.01, 1.0});
    auto lasso_b = learners::default_spec(learners::Family::l1_linear, learners::Role::outcome);
    lasso_b.set_dimension("lambda", {0.01, 1.0});
    lasso_b.cv_folds = 3;
    lasso_p.cv_folds = 3;
    lib.propensity = {lasso_p, learners::default_spec(learners::Family::constant, learners::Role::propensity)};
    lib.outcome = {lasso_b, learners::default_spec(learners::Family::constant, learners::Role::outcome)};
    RunConfig cfg;
    cfg.functional = FunctionalKind::mar_mean;
    cfg.seed = 9;
    cfg.bootstrap_reps = 25;
    BootstrapPlan plan;
    plan.reps = 25;
    const auto r1 = run_estimate(d, lib, cfg, plan);
    const std::size_t before = max_threads();
    set_max_threads(1);
    const auto r2 = run_estimate(d, lib, cfg, plan);
    set_max_threads(before);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(r1.criteria[c].bootstrap->replicates == r2.criteria[c].bootstrap->replicates);
        CHECK(r1.criteria[c].bootstrap->lo <= r1.criteria[c].bootstrap->hi);
    }
}

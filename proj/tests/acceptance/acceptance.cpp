// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any selected criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drselect/core/parallel.hpp"
#include "drselect/core/seed.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/functionals/mixed_bias.hpp"
#include "drselect/inference/smooth_max.hpp"
#include "drselect/learners/library.hpp"
#include "drselect/selector/pseudo_risk.hpp"
#include "drselect/simulation/dgp.hpp"
#include "drselect/simulation/experiment.hpp"
#include "drselect/simulation/rates.hpp"
#include "support/toy_law.hpp"

namespace fs = std::filesystem;
using namespace drselect;
using learners::Family;
using learners::Role;

namespace {

struct Settings {
    bool smoke = false;
    std::size_t reps = 0;  // 0: the criterion's own count
    std::uint64_t seed = 20240601;
    std::string cli_path;
    fs::path work = fs::temp_directory_path() / "drselect_acceptance";
};

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// %.17g keeps the CSV round-trip exact.
std::string io_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t reps_or(const Settings& s, std::size_t full, std::size_t smoke) {
    if (s.reps) return s.reps;
    return s.smoke ? smoke : full;
}

// Tracks the largest violation of each named check.
struct Checks {
    std::map<std::string, double> worst;
    std::map<std::string, std::size_t> failures;
    void expect(const std::string& name, bool ok, double violation = 0.0) {
        worst[name] = std::max(worst[name], violation);
        if (!ok) ++failures[name];
    }
    Verdict verdict() const {
        Verdict v{true, ""};
        for (const auto& [name, count] : failures) {
            if (count) {
                v.pass = false;
                v.detail += name + " failed " + std::to_string(count) + "x; ";
            }
        }
        if (v.pass) v.detail = std::to_string(worst.size()) + " property families hold";
        return v;
    }
};

selector::PsiGrid random_grid(std::mt19937_64& rng, std::size_t S, std::size_t K, std::size_t L) {
    std::normal_distribution<double> z(0.0, 1.0);
    selector::PsiGrid g(S, K, L);
    for (double& v : g.values) v = z(rng);
    return g;
}

double brute_per(const selector::PsiGrid& g, std::size_t k, std::size_t l, std::size_t k0, std::size_t l0) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.S; ++i) s += std::pow(g.at(i, k, l) - g.at(i, k0, l0), 2);
    return s / static_cast<double>(g.S);
}

Verdict criterion1(const Settings&) {
    Checks c;
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t K = 3 + rep % 2;
        const std::size_t L = 3 + (rep / 2) % 2;
        const std::size_t S = 1 + rep % 4;
        const auto g = random_grid(rng, S, K, L);
        const auto surf = selector::compute_surface(g);
        for (std::size_t k0 = 0; k0 < K; ++k0) {
            for (std::size_t l0 = 0; l0 < L; ++l0) {
                c.expect("per null", selector::perturbation_hat(g, k0, l0, k0, l0) == 0.0);
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t l = 0; l < L; ++l)
                        c.expect("per symmetry",
                                 selector::perturbation_hat(g, k, l, k0, l0) == selector::perturbation_hat(g, k0, l0, k, l));
                double b1 = 0.0, rows = 0.0, cols = 0.0;
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t l = 0; l < L; ++l)
                        if (k == k0 || l == l0) b1 = std::max(b1, brute_per(g, k, l, k0, l0));
                for (std::size_t l1 = 0; l1 < L; ++l1)
                    for (std::size_t l2 = 0; l2 < L; ++l2) rows = std::max(rows, brute_per(g, k0, l1, k0, l2));
                for (std::size_t k1 = 0; k1 < K; ++k1)
                    for (std::size_t k2 = 0; k2 < K; ++k2) cols = std::max(cols, brute_per(g, k1, l0, k2, l0));
                const double e1 = std::abs(surf.b1_at(k0, l0) - b1);
                const double e2 = std::abs(surf.b2_at(k0, l0) - (rows + cols));
                c.expect("brute-force b1", e1 <= 1e-12, e1);
                c.expect("brute-force b2", e2 <= 1e-12, e2);
                c.expect("b1 <= b2", surf.b1_at(k0, l0) <= surf.b2_at(k0, l0) + 1e-15);
            }
        }
        // separability: the 2-D argmin of b2 is the pair of 1-D argmins
        const auto sel = selector::select(surf, Criterion::mixed_minimax);
        const auto rk = static_cast<std::size_t>(std::min_element(surf.row_term.begin(), surf.row_term.end()) -
                                                 surf.row_term.begin());
        const auto cl = static_cast<std::size_t>(std::min_element(surf.col_term.begin(), surf.col_term.end()) -
                                                 surf.col_term.begin());
        c.expect("b2 separability", sel.k == rk && sel.l == cl);

        double lo = 1e300, hi = -1e300;
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < L; ++l) {
                lo = std::min(lo, g.mean(k, l));
                hi = std::max(hi, g.mean(k, l));
            }
        for (Criterion cr : {Criterion::minimax, Criterion::mixed_minimax}) {
            const double logm = std::log(static_cast<double>(inference::term_count(K, L, cr)));
            for (double tau : {0.3, 2.0, 50.0}) {
                const auto sm = inference::smooth_max(g, tau, cr);
                const auto& hard = surf.matrix(cr);
                for (std::size_t i = 0; i < K * L; ++i) {
                    const double below = hard[i] - sm.gamma[i];
                    const double above = sm.gamma[i] - hard[i] - logm / tau;
                    c.expect("smooth-max sandwich", below <= 1e-12 && above <= 1e-12, std::max(below, above));
                }
                const double total = std::accumulate(sm.weights.begin(), sm.weights.end(), 0.0);
                c.expect("weight simplex",
                         std::abs(total - 1.0) <= 1e-12 &&
                             std::all_of(sm.weights.begin(), sm.weights.end(), [](double w) { return w >= 0.0; }),
                         std::abs(total - 1.0));
                auto shifted = sm.gamma;
                for (double& v : shifted) v += 17.25;
                const auto w2 = inference::smooth_weights(shifted, tau);
                double dev = 0.0;
                for (std::size_t i = 0; i < w2.size(); ++i) dev = std::max(dev, std::abs(w2[i] - sm.weights[i]));
                c.expect("weight shift invariance", dev <= 1e-12, dev);
                c.expect("psi(tau) in convex hull", sm.psi_tau >= lo - 1e-12 && sm.psi_tau <= hi + 1e-12);
            }
        }
    }

    // affine estimating equation: P(H - psi) is affine with slope -1 and the
    // root-finding path reproduces the closed form.
    const Dataset d = sim::generate({500, 2});
    const auto rows = all_rows(d.n());
    const auto def = functionals::make_functional(FunctionalKind::mar_mean);
    for (int rep = 0; rep < 20; ++rep) {
        std::uniform_real_distribution<double> u(0.2, 0.8), v(-3, 3);
        const double pc = u(rng), bc = v(rng), slope = v(rng);
        const auto p = testsupport::nuisance(Role::propensity, [=](std::span<const double> x) {
            return std::clamp(pc + 0.1 * x[0], 0.05, 0.95);
        });
        const auto b = testsupport::nuisance(Role::outcome, [=](std::span<const double> x) { return bc + slope * x[1]; }, 1);
        const auto h = functionals::h_values(def, p, {{b}}, d, rows);
        const double psi = functionals::estimate_psi(def, p, {{b}}, d, rows);
        const double mean_h = std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(h.size());
        for (double t : {-2.0, 0.0, 5.0}) {
            const double ee = mean_h - t;
            const double err = std::abs(ee - (psi - t));
            c.expect("affine estimating equation", err <= 1e-10, err);
        }
        auto plugin = functionals::mar_mean_plugin();
        const double closed = functionals::solve_mixed_bias(plugin, p, b, d, rows);
        plugin.psi_slope.reset();
        const double numeric = functionals::solve_mixed_bias(plugin, p, b, d, rows);
        c.expect("closed form = bisection", std::abs(closed - numeric) <= 1e-8, std::abs(closed - numeric));
        c.expect("closed form = estimate_psi", std::abs(closed - psi) <= 1e-10, std::abs(closed - psi));
    }

    // ate = treated mean - control mean, pointwise
    const auto ate = functionals::make_functional(FunctionalKind::ate);
    const auto cf1 = functionals::make_functional(FunctionalKind::counterfactual_mean, std::nullopt, 1);
    const auto cf0 = functionals::make_functional(FunctionalKind::counterfactual_mean, std::nullopt, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto pf = testsupport::random_cell_function(rng, 0.05, 0.95);
        const auto b1 = testsupport::random_cell_function(rng, -5, 5);
        const auto b0 = testsupport::random_cell_function(rng, -5, 5);
        const auto p = testsupport::nuisance(Role::propensity, pf);
        const functionals::OutcomeFit fa{{testsupport::nuisance(Role::outcome, b1, 1),
                                          testsupport::nuisance(Role::outcome, b0, 0)}};
        const functionals::OutcomeFit f1{{testsupport::nuisance(Role::outcome, b1, 1)}};
        const functionals::OutcomeFit f0{{testsupport::nuisance(Role::outcome, b0, 0)}};
        for (int cell = 0; cell < 4; ++cell) {
            const auto x = testsupport::ToyLaw::covariates(cell);
            for (int a : {0, 1}) {
                const functionals::Observation o{x, a, 0.5 + cell};
                const double diff = functionals::h_transform(ate, p, fa, o) -
                                    (functionals::h_transform(cf1, p, f1, o) - functionals::h_transform(cf0, p, f0, o));
                c.expect("ate decomposition", std::abs(diff) <= 1e-12, std::abs(diff));
            }
        }
    }
    return c.verdict();
}

Verdict criterion2(const Settings&) {
    std::mt19937_64 rng(2);
    double worst = 0.0;
    std::size_t evaluated = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto law = testsupport::ToyLaw::random(rng);
        const auto true_pi = testsupport::nuisance(
            Role::propensity, [&law](std::span<const double> x) { return law.pi[testsupport::ToyLaw::cell_of(x)]; });
        const auto wrong_pi = testsupport::nuisance(Role::propensity, testsupport::random_cell_function(rng, 0.1, 0.9));
        const auto marg_b = [&law](std::span<const double> x) { return law.mean_y(testsupport::ToyLaw::cell_of(x)); };
        const auto arm1_b = [&law](std::span<const double> x) { return law.mean_y(1, testsupport::ToyLaw::cell_of(x)); };
        const auto wrong_b = testsupport::random_cell_function(rng, -4, 4);
        const double pib = law.expect_x([&](int cell) { return law.pi[cell] * law.mean_y(cell); });
        struct Case {
            FunctionalKind kind;
            double psi;
            std::function<double(std::span<const double>)> b_true;
            std::optional<int> arm;
        };
        const Case cases[] = {
            {FunctionalKind::mar_mean, law.expect_x([&](int cell) { return law.mean_y(1, cell); }), arm1_b, 1},
            {FunctionalKind::expected_cond_cov,
             law.expect([](std::span<const double>, int a, double y) { return a * y; }) - pib, marg_b, std::nullopt},
            {FunctionalKind::expected_product, pib, marg_b, std::nullopt},
        };
        for (const auto& cs : cases) {
            const auto def = functionals::make_functional(cs.kind);
            const functionals::OutcomeFit bt{{testsupport::nuisance(Role::outcome, cs.b_true, cs.arm)}};
            const functionals::OutcomeFit bw{{testsupport::nuisance(Role::outcome, wrong_b, cs.arm)}};
            for (double v : {testsupport::exact_mean_h(law, def, true_pi, bw),
                             testsupport::exact_mean_h(law, def, wrong_pi, bt)}) {
                worst = std::max(worst, std::abs(v - cs.psi));
                ++evaluated;
            }
        }
    }
    return {worst <= 1e-12, std::to_string(evaluated) + " misspecified expectations, max |E H - psi| = " + fmt(worst)};
}

learners::LearnerSpec biased_oracle(Role role, double bias, double direction, std::string label) {
    auto s = learners::default_spec(Family::oracle_sim, role, std::move(label));
    s.set_dimension("bias", {bias});
    s.set_dimension("direction", {direction});
    return s;
}

Verdict criterion3(const Settings& s) {
    sim::ExperimentPlan plan;
    plan.n = 4000;
    plan.reps = reps_or(s, 200, 40);
    plan.seed = s.seed + 3;
    plan.S = 3;
    plan.library.propensity = {learners::default_spec(Family::oracle_sim, Role::propensity),
                               learners::default_spec(Family::constant, Role::propensity),
                               biased_oracle(Role::propensity, 0.15, 11, "shifted_oracle")};
    plan.library.outcome = {learners::default_spec(Family::oracle_sim, Role::outcome),
                            learners::default_spec(Family::constant, Role::outcome),
                            biased_oracle(Role::outcome, 1.5, 13, "shifted_oracle")};
    plan.methods = sim::parse_methods("minimax,mixed_minimax");
    const auto report = sim::run_experiment(plan);

    // oracle pair alone, for the Monte Carlo standard error of its estimate
    sim::ExperimentPlan oracle_plan = plan;
    oracle_plan.library.propensity.resize(1);
    oracle_plan.library.outcome.resize(1);
    oracle_plan.methods = sim::parse_methods("mixed_minimax");
    const auto oracle = sim::run_experiment(oracle_plan);
    std::vector<double> est;
    for (const auto& r : oracle.records)
        if (!r.failed) est.push_back(r.estimate[0]);
    const double mean = std::accumulate(est.begin(), est.end(), 0.0) / static_cast<double>(est.size());
    double var = 0.0;
    for (double e : est) var += (e - mean) * (e - mean);
    const double sd = std::sqrt(var / static_cast<double>(est.size() - 1));

    bool pass = true;
    std::string detail;
    for (std::size_t m = 0; m < 2; ++m) {
        std::size_t hits = 0, kept = 0;
        for (const auto& r : report.records) {
            if (r.failed) continue;
            ++kept;
            const auto comma = r.selected[m].find(',');
            if (r.selected[m].substr(0, comma) == "0" || r.selected[m].substr(comma + 1) == "0") ++hits;
        }
        const double share = static_cast<double>(hits) / static_cast<double>(kept);
        const double mab = report.summaries[m].mean_abs_bias;
        pass = pass && share >= 0.90 && mab <= 0.15;
        detail += plan.methods[m].name + ": oracle-containing pair " + fmt(share, 3) + ", mean |psi-7| " + fmt(mab, 3) +
                  "; ";
    }
    detail += "oracle-pair sd " + fmt(sd, 3) + " over " + std::to_string(plan.reps) + " reps";
    return {pass, detail};
}

Verdict criterion4(const Settings& s) {
    sim::ExperimentPlan plan;
    plan.n = 1000;
    plan.reps = reps_or(s, 200, 50);
    plan.seed = s.seed + 4;
    plan.methods = sim::parse_methods("minimax,mixed_minimax");
    plan.tau = std::log(9.0);
    plan.bootstrap_reps = 200;
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = sim::run_experiment(plan);
    const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;
    const double lo_cov = s.smoke ? 0.86 : 0.90;
    const double hi_cov = s.smoke ? 1.00 : 0.99;
    const double paper_width[2] = {0.605, 0.580};
    bool pass = true;
    std::string detail;
    for (std::size_t m = 0; m < 2; ++m) {
        const auto& sm = report.summaries[m];
        const bool cov_ok = sm.coverage >= lo_cov && sm.coverage <= hi_cov;
        const bool width_ok = sm.mean_width >= paper_width[m] / 2.0 && sm.mean_width <= paper_width[m] * 2.0;
        pass = pass && cov_ok && width_ok;
        detail += sm.name + ": coverage " + fmt(sm.coverage, 3) + " (L " + fmt(sm.lower_error, 3) + ", U " +
                  fmt(sm.upper_error, 3) + "), width " + fmt(sm.mean_width, 3) + "; ";
    }
    detail += std::to_string(plan.reps) + " reps, " + std::to_string(report.failures) + " failed, " +
              fmt(minutes, 3) + " min";
    return {pass, detail};
}

Verdict criterion5(const Settings& s) {
    sim::ExperimentPlan plan;
    plan.n = 500;
    plan.reps = reps_or(s, 200, 40);
    plan.seed = s.seed + 5;
    plan.methods = sim::parse_methods("mixed_minimax,ddml_l1,ddml_forest,minimax");
    const auto report = sim::run_experiment(plan);
    const double base = report.summary("mixed_minimax").mean_abs_bias;
    const double r_l1 = report.summary("ddml_l1").mean_abs_bias / base;
    const double r_rf = report.summary("ddml_forest").mean_abs_bias / base;
    const double r_mm = report.summary("minimax").mean_abs_bias / base;
    // informational: |mean signed bias| ratios
    const double signed_base = std::abs(report.summary("mixed_minimax").mean_bias);
    const double s_l1 = std::abs(report.summary("ddml_l1").mean_bias) / signed_base;
    const double s_rf = std::abs(report.summary("ddml_forest").mean_bias) / signed_base;
    return {r_l1 >= 1.5 && r_rf >= 1.5,
            "mixed-minimax mean |bias| " + fmt(base, 3) + "; ratios ddml_l1 " + fmt(r_l1, 3) + ", ddml_forest " +
                fmt(r_rf, 3) + " (minimax " + fmt(r_mm, 3) + "); |mean signed bias| mixed " + fmt(signed_base, 3) +
                ", ratios ddml_l1 " + fmt(s_l1, 3) + ", ddml_forest " + fmt(s_rf, 3) + "; " +
                std::to_string(plan.reps) + " reps"};
}

Verdict criterion6(const Settings& s) {
    sim::RatePlan plan;
    plan.n_grid = {8000};
    plan.reps = reps_or(s, 200, 50);
    plan.seed = s.seed + 6;
    const sim::SyntheticLearnerFamily p{Role::propensity, {{1.0, 0.5}, {0.3, 0.0}}};
    const sim::SyntheticLearnerFamily b{Role::outcome, {{1.0, 0.25}, {0.3, 0.0}}};
    const auto pts = sim::rate_experiment(p, b, plan);
    const auto& pt = pts.front();
    const double mm = pt.median_abs(pt.oracle_minimax);
    const double mx = pt.median_abs(pt.oracle_mixed);
    std::size_t differ = 0;
    for (std::size_t r = 0; r < pt.oracle_mixed.size(); ++r) differ += pt.oracle_mixed[r] != pt.oracle_minimax[r];
    return {mx <= mm, "n=8000: oracle median |bias| mixed " + fmt(mx, 3) + " vs minimax " + fmt(mm, 3) +
                          ", selectors differ in " + std::to_string(differ) + " reps" +
                          " (empirical " + fmt(pt.median_abs(pt.empirical_mixed), 3) + " vs " +
                          fmt(pt.median_abs(pt.empirical_minimax), 3) + "), " + std::to_string(plan.reps) + " reps"};
}

Verdict criterion7(const Settings& s) {
    sim::ExcessRiskPlan plan;
    plan.n = 1000;
    plan.reps = reps_or(s, 200, 30);
    plan.seed = s.seed + 7;
    plan.eval_size = 20000;
    const auto r = sim::excess_risk_experiment(plan);
    const double mm = sim::ExcessRiskResult::median(r.minimax_ratio);
    const double mx = sim::ExcessRiskResult::median(r.mixed_ratio);
    return {mm <= 2.0 && mx <= 2.0, "median ratio minimax " + fmt(mm, 4) + ", mixed " + fmt(mx, 4) + " over " +
                                        std::to_string(r.minimax_ratio.size()) + " reps (" +
                                        std::to_string(r.failures) + " failed)"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict criterion8(const Settings& s) {
    if (s.cli_path.empty()) return {false, "no CLI binary given"};
    const fs::path root = s.work / "c8";
    fs::remove_all(root);
    fs::create_directories(root);
    {
        const Dataset d = sim::generate({300, 8});
        std::ofstream csv(root / "data.csv");
        csv << "y,a,x1,x2,x3,x4,x5\n";
        for (std::size_t i = 0; i < d.n(); ++i) {
            csv << io_number(d.y(i)) << "," << d.a(i);
            for (std::size_t j = 0; j < d.d(); ++j) csv << "," << io_number(d.x(i, j));
            csv << "\n";
        }
        std::ofstream(root / "grid.json") << R"({"psi_grid": [[[0, 1], [2, 0]], [[0.5, 1], [2, 0.25]]]})";
    }
    const std::string data = (root / "data.csv").string();
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"estimate", "estimate --data " + data + " --criterion both --bootstrap 10 --seed 5"},
        {"estimate_mar", "estimate --data " + data + " --functional mar_mean --epsilon 0.5 --seed 6"},
        {"risk_grid_data", "risk-grid --data " + data + " --seed 7"},
        {"risk_grid_toy", "risk-grid --grid-in " + (root / "grid.json").string()},
        {"simulate", "simulate --n 300 --reps 3 --methods minimax,mixed_minimax,ddml_l1 --bootstrap 5 --seed 8"},
    };
    std::size_t files = 0;
    for (const auto& [name, args] : commands) {
        for (int threads : {1, 4}) {
            const fs::path out = root / (name + "_t" + std::to_string(threads));
            const std::string cmd = "\"" + s.cli_path + "\" " + args + " --threads " + std::to_string(threads) +
                                    " --out \"" + out.string() + "\" 2> \"" + (root / "stderr.txt").string() + "\"";
            if (std::system(cmd.c_str()) != 0) return {false, name + " exited nonzero: " + slurp(root / "stderr.txt")};
        }
        const fs::path a = root / (name + "_t1");
        const fs::path b = root / (name + "_t4");
        std::vector<std::string> names;
        for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
        std::size_t in_b = 0;
        for (const auto& e : fs::directory_iterator(b)) (void)e, ++in_b;
        if (names.empty() || names.size() != in_b) return {false, name + ": artifact sets differ"};
        for (const auto& f : names) {
            if (slurp(a / f) != slurp(b / f)) return {false, name + ": " + f + " differs between --threads 1 and 4"};
            ++files;
        }
    }
    return {true, std::to_string(files) + " artifacts byte-identical across --threads 1 and 4 (" +
                      std::to_string(commands.size()) + " commands)"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    Settings s;
    std::vector<int> which;
    std::string mode = "full";
    std::size_t threads = 0;
    app.add_option("--criterion", which, "criteria to run (default all)");
    app.add_option("--mode", mode, "full | smoke")->check(CLI::IsMember({"full", "smoke"}));
    app.add_option("--reps", s.reps, "override the replication count");
    app.add_option("--seed", s.seed, "master seed");
    app.add_option("--threads", threads, "worker cap");
    app.add_option("--cli", s.cli_path, "drselect binary for criterion 8");
    CLI11_PARSE(app, argc, argv);
    s.smoke = mode == "smoke";
    if (threads) set_max_threads(threads);
    if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8};

    const std::map<int, std::pair<std::string, std::function<Verdict(const Settings&)>>> table = {
        {1, {"deterministic invariants", criterion1}},
        {2, {"exact double robustness on a toy law", criterion2}},
        {3, {"oracle recovery", criterion3}},
        {4, {"bootstrap coverage and width", criterion4}},
        {5, {"bias ordering against DDML at n=500", criterion5}},
        {6, {"rate ordering of the oracle selectors", criterion6}},
        {7, {"empirical excess risk", criterion7}},
        {8, {"CLI reproducibility across worker caps", criterion8}},
    };
    bool all = true;
    for (int c : which) {
        const auto it = table.find(c);
        if (it == table.end()) {
            std::cerr << "unknown criterion " << c << "\n";
            return 2;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = it->second.second(s);
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c << " (" << it->second.first
                  << (s.smoke ? ", smoke" : "") << "): " << v.detail << " [" << fmt(secs, 4) << " s]" << std::endl;
        all = all && v.pass;
    }
    return all ? 0 : 1;
}

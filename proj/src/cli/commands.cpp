#include "drselect/cli/commands.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "drselect/core/config.hpp"
#include "drselect/core/error.hpp"
#include "drselect/core/parallel.hpp"
#include "drselect/inference/estimate.hpp"
#include "drselect/io/json_out.hpp"
#include "drselect/learners/library.hpp"
#include "drselect/selector/pseudo_risk.hpp"
#include "drselect/simulation/experiment.hpp"

namespace drselect::cli {

namespace {

using io::Json;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
    std::string out;
    std::vector<std::string> sets;
};

struct EstimateFlags {
    std::string data;
    std::string criterion;
    std::optional<double> tau;
    std::optional<double> epsilon;
    std::optional<std::size_t> bootstrap;
    std::optional<double> level;
    std::string functional;
    std::optional<std::size_t> S;
    std::string split_kind;
    std::optional<double> M1;
    std::optional<double> M2;
    std::optional<int> arm;
    std::optional<double> mnar_alpha;
    bool retune = false;
};

struct SimulateFlags {
    std::size_t n = 1000;
    std::size_t reps = 200;
    std::string methods = "minimax,mixed_minimax,ddml_l1,ddml_forest,ddml_gbt";
    std::size_t bootstrap = 0;
    std::optional<double> tau;
    std::string functional = "ate";
    int arm = 1;
    std::size_t S = 3;
    bool retune = false;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot read " + path, "io");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string real_text(double v) { return io::format_number(v); }

// Config file, then --set pairs, then dedicated flags; the seed falls back to
// DRSELECT_SEED when neither file nor flags give one.
KeyValueConfig resolve_config(const CommonOptions& common) {
    KeyValueConfig kv = common.config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(common.config_path);
    for (const auto& s : common.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        std::string key = s.substr(0, eq);
        std::string value = s.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        kv.set(key, value);
    }
    if (common.seed) {
        kv.set("seed", std::to_string(*common.seed));
    } else if (!kv.get("seed")) {
        if (const char* env = std::getenv("DRSELECT_SEED"); env && *env) kv.set("seed", env);
    }
    return kv;
}

void apply_estimate_flags(const EstimateFlags& f, KeyValueConfig& kv) {
    if (!f.criterion.empty()) kv.set("criterion", f.criterion);
    if (f.tau) kv.set("tau", real_text(*f.tau));
    if (f.epsilon) kv.set("epsilon", real_text(*f.epsilon));
    if (f.bootstrap) kv.set("bootstrap_reps", std::to_string(*f.bootstrap));
    if (f.level) kv.set("level", real_text(*f.level));
    if (!f.functional.empty()) kv.set("functional", f.functional);
    if (f.S) kv.set("S", std::to_string(*f.S));
    if (!f.split_kind.empty()) kv.set("split_kind", f.split_kind);
    if (f.M1) kv.set("M1", real_text(*f.M1));
    if (f.M2) kv.set("M2", real_text(*f.M2));
    if (f.arm) kv.set("arm", std::to_string(*f.arm));
    if (f.mnar_alpha) kv.set("mnar.alpha", real_text(*f.mnar_alpha));
}

Json data_input(const std::string& path) {
    const std::string text = read_file(path);
    Json j;
    j["path"] = path;
    j["fnv1a64"] = hex64(fnv1a64(text));
    return j;
}

void emit(const Json& result, const Json& manifest, const std::string& out, const std::string& file_name) {
    if (out.empty()) {
        Json combined = result;
        combined["manifest"] = manifest;
        std::cout << io::dump(combined);
        return;
    }
    const std::filesystem::path dir(out);
    io::write_text(dir / file_name, io::dump(result));
    io::write_text(dir / "manifest.json", io::dump(manifest));
}

Json surface_json(const selector::PsiGrid& grid, const selector::PseudoRiskSurface& surface) {
    Json j;
    j["labels"] = {{"p", grid.p_labels}, {"b", grid.b_labels}};
    Json psi = Json::array();
    for (std::size_t s = 0; s < grid.S; ++s) {
        std::vector<double> slice(grid.values.begin() + static_cast<std::ptrdiff_t>(s * grid.K * grid.L),
                                  grid.values.begin() + static_cast<std::ptrdiff_t>((s + 1) * grid.K * grid.L));
        psi.push_back(io::matrix_json(slice, grid.K, grid.L));
    }
    j["psi_grid"] = std::move(psi);
    j["b1"] = io::matrix_json(surface.b1, surface.K, surface.L);
    j["b2"] = io::matrix_json(surface.b2, surface.K, surface.L);
    j["row_term"] = surface.row_term;
    j["col_term"] = surface.col_term;
    Json selected;
    for (Criterion c : {Criterion::minimax, Criterion::mixed_minimax}) {
        const auto sel = selector::select(surface, c);
        Json s;
        s["k"] = sel.k;
        s["l"] = sel.l;
        if (sel.k < grid.p_labels.size()) s["p_label"] = grid.p_labels[sel.k];
        if (sel.l < grid.b_labels.size()) s["b_label"] = grid.b_labels[sel.l];
        s["risk"] = sel.risk;
        s["ties"] = sel.ties;
        s["estimate"] = selector::final_estimate(grid, sel.k, sel.l);
        selected[std::string(to_string(c))] = std::move(s);
    }
    j["selected"] = std::move(selected);
    return j;
}

Json nuisance_json(const selector::NuisanceCache& cache) {
    Json arr = Json::array();
    const auto add = [&](const learners::FittedNuisance& f, std::size_t s, const std::string& role) {
        Json j;
        j["split"] = s;
        j["role"] = role;
        if (f.arm) j["arm"] = *f.arm;
        j["learner"] = f.provenance.learner;
        j["tuning"] = f.provenance.tuning;
        j["fallback"] = f.provenance.fallback;
        if (!f.provenance.notes.empty()) j["notes"] = f.provenance.notes;
        arr.push_back(std::move(j));
    };
    for (std::size_t s = 0; s < cache.propensity.size(); ++s) {
        for (const auto& p : cache.propensity[s]) add(p, s, "propensity");
        for (const auto& b : cache.outcome[s])
            for (const auto& part : b.parts) add(part, s, "outcome");
    }
    return arr;
}

int cmd_estimate(const CommonOptions& common, const EstimateFlags& flags) {
    KeyValueConfig kv = resolve_config(common);
    apply_estimate_flags(flags, kv);
    const RunConfig cfg = run_config_from(kv);
    cfg.validate();
    const auto lib = learners::library_from(kv);
    if (flags.data.empty()) throw ValidationError("estimate requires --data", "usage");
    const Dataset data = load_dataset(flags.data, cfg.schema);

    inference::BootstrapPlan plan;
    plan.retune = flags.retune;
    const auto report = inference::run_estimate(data, lib, cfg, plan);

    Json result;
    result["functional"] = report.selection.functional;
    result["n"] = data.n();
    result["d"] = data.d();
    result["S"] = report.selection.grid.S;
    result["K"] = report.selection.grid.K;
    result["L"] = report.selection.grid.L;
    Json surf = surface_json(report.selection.grid, report.selection.surface);
    for (auto it = surf.begin(); it != surf.end(); ++it) result[it.key()] = it.value();
    Json crit = Json::array();
    for (const auto& e : report.criteria) {
        Json c;
        c["criterion"] = std::string(to_string(e.criterion));
        c["selected"] = {{"k", e.selection.k},
                         {"l", e.selection.l},
                         {"p_label", report.selection.grid.p_labels[e.selection.k]},
                         {"b_label", report.selection.grid.b_labels[e.selection.l]},
                         {"ties", e.selection.ties}};
        c["estimate"] = e.estimate;
        c["tau"] = e.tau.tau;
        c["m"] = e.tau.m;
        c["gamma"] = io::matrix_json(e.smooth.gamma, e.smooth.K, e.smooth.L);
        c["weights"] = io::matrix_json(e.smooth.weights, e.smooth.K, e.smooth.L);
        c["psi_tau"] = e.smooth.psi_tau;
        if (e.bootstrap) {
            c["ci"] = {{"lo", e.bootstrap->lo},       {"hi", e.bootstrap->hi},
                       {"se", e.bootstrap->se},       {"level", cfg.level},
                       {"reps", e.bootstrap->reps},   {"dropped", e.bootstrap->dropped},
                       {"point", e.bootstrap->point}};
        }
        crit.push_back(std::move(c));
    }
    result["criteria"] = std::move(crit);
    result["nuisances"] = nuisance_json(report.selection.nuisances);
    result["notes"] = report.notes;

    Json inputs;
    inputs["data"] = data_input(flags.data);
    inputs["retune"] = flags.retune;
    emit(result, io::manifest("estimate", kv.canonical(), cfg.seed, inputs), common.out, "estimate.json");
    return kExitOk;
}

selector::PsiGrid grid_from_json(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("invalid grid JSON: ") + e.what(), "parse");
    }
    if (!j.contains("psi_grid") || !j["psi_grid"].is_array() || j["psi_grid"].empty()) {
        throw SchemaError("grid JSON needs a non-empty \"psi_grid\" array of S x K x L numbers");
    }
    const auto& g = j["psi_grid"];
    const std::size_t S = g.size();
    const std::size_t K = g[0].size();
    const std::size_t L = K ? g[0][0].size() : 0;
    if (K == 0 || L == 0) throw SchemaError("psi_grid must have K, L >= 1");
    selector::PsiGrid grid(S, K, L);
    for (std::size_t s = 0; s < S; ++s) {
        if (g[s].size() != K) throw SchemaError("psi_grid rows are ragged");
        for (std::size_t k = 0; k < K; ++k) {
            if (g[s][k].size() != L) throw SchemaError("psi_grid rows are ragged");
            for (std::size_t l = 0; l < L; ++l) {
                if (!g[s][k][l].is_number()) throw SchemaError("psi_grid entries must be numbers");
                grid.at(s, k, l) = g[s][k][l].get<double>();
            }
        }
    }
    for (std::size_t k = 0; k < K; ++k) grid.p_labels.push_back("p" + std::to_string(k + 1));
    for (std::size_t l = 0; l < L; ++l) grid.b_labels.push_back("b" + std::to_string(l + 1));
    if (j.contains("labels")) {
        const auto& lab = j["labels"];
        if (lab.contains("p") && lab["p"].size() == K) grid.p_labels = lab["p"].get<std::vector<std::string>>();
        if (lab.contains("b") && lab["b"].size() == L) grid.b_labels = lab["b"].get<std::vector<std::string>>();
    }
    try {
        grid.check_finite();
    } catch (const EstimationError& e) {
        throw ValidationError(e.what(), "schema");
    }
    return grid;
}

int cmd_risk_grid(const CommonOptions& common, const EstimateFlags& flags, const std::string& grid_in) {
    KeyValueConfig kv = resolve_config(common);
    apply_estimate_flags(flags, kv);
    Json inputs;
    selector::PsiGrid grid;
    std::uint64_t seed = 0;
    if (!grid_in.empty()) {
        if (!flags.data.empty()) throw ValidationError("give either --data or --grid-in, not both", "usage");
        grid = grid_from_json(grid_in);
        inputs["grid"] = data_input(grid_in);
        if (auto s = kv.get("seed")) seed = std::stoull(*s);
    } else {
        if (flags.data.empty()) throw ValidationError("risk-grid requires --data or --grid-in", "usage");
        const RunConfig cfg = run_config_from(kv);
        cfg.validate();
        seed = cfg.seed;
        const auto lib = learners::library_from(kv);
        const Dataset data = load_dataset(flags.data, cfg.schema);
        const auto def = functionals::make_functional(cfg);
        const auto sel = selector::run_selection(data, lib, def, selector::pipeline_options(cfg));
        grid = sel.grid;
        inputs["data"] = data_input(flags.data);
    }
    const auto surface = selector::compute_surface(grid);
    Json result;
    result["S"] = grid.S;
    result["K"] = grid.K;
    result["L"] = grid.L;
    Json surf = surface_json(grid, surface);
    for (auto it = surf.begin(); it != surf.end(); ++it) result[it.key()] = it.value();
    emit(result, io::manifest("risk-grid", kv.canonical(), seed, inputs), common.out, "risk_grid.json");
    return kExitOk;
}

sim::ExperimentPlan simulation_plan(const CommonOptions& common, const SimulateFlags& f, KeyValueConfig& kv) {
    sim::ExperimentPlan plan;
    plan.n = f.n;
    plan.reps = f.reps;
    plan.methods = sim::parse_methods(f.methods);
    plan.bootstrap_reps = f.bootstrap;
    if (f.tau) plan.tau = *f.tau;
    if (!(plan.tau > 0.0)) throw ConfigError("tau must be positive");
    plan.functional = parse_functional_kind(f.functional);
    if (plan.functional != FunctionalKind::ate && plan.functional != FunctionalKind::counterfactual_mean) {
        throw ConfigError("simulate supports functional ate or counterfactual_mean");
    }
    plan.arm = f.arm;
    plan.S = f.S;
    plan.retune = f.retune;
    const RunConfig cfg = run_config_from(kv);
    plan.seed = cfg.seed;
    plan.M1 = cfg.M1;
    plan.split_kind = cfg.split_kind;
    plan.level = cfg.level;
    plan.library = learners::library_from(kv);
    if (plan.n < 2 * plan.S) throw ConfigError("n too small for S folds");
    (void)common;
    return plan;
}

Json plan_json(const sim::ExperimentPlan& p, const std::string& methods) {
    Json j;
    j["n"] = p.n;
    j["reps"] = p.reps;
    j["methods"] = methods;
    j["bootstrap"] = p.bootstrap_reps;
    j["tau"] = p.tau;
    j["functional"] = std::string(to_string(p.functional));
    j["arm"] = p.arm;
    j["S"] = p.S;
    j["retune"] = p.retune;
    return j;
}

int cmd_simulate(const CommonOptions& common, const SimulateFlags& f, const std::string& command) {
    KeyValueConfig kv = resolve_config(common);
    const auto plan = simulation_plan(common, f, kv);
    const auto report = sim::run_experiment(plan);
    const Json manifest = io::manifest(command, kv.canonical(), plan.seed, Json{{"plan", plan_json(plan, f.methods)}});
    if (common.out.empty()) {
        Json j = sim::experiment_json(report);
        j["manifest"] = manifest;
        std::cout << io::dump(j);
    } else {
        sim::write_experiment(report, common.out, manifest);
    }
    return kExitOk;
}

void print_error(const std::string& kind, const std::string& message) {
    Json e;
    e["error"] = {{"kind", kind}, {"message", message}};
    std::cerr << e.dump() << "\n";
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Selective machine learning for doubly robust functionals"};
    app.require_subcommand(1);
    app.set_version_flag("--version", io::kVersion);

    CommonOptions common;
    EstimateFlags eflags;
    SimulateFlags sflags;
    std::string grid_in;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "key=value configuration file");
        sub->add_option("--seed", common.seed, "master seed (overrides config and DRSELECT_SEED)");
        sub->add_option("--threads", common.threads, "worker cap; results do not depend on it");
        sub->add_option("--out", common.out, "output directory (stdout when omitted)");
        sub->add_option("--set", common.sets, "config override key=value (repeatable)");
    };
    const auto add_estimation = [&](CLI::App* sub) {
        sub->add_option("--data", eflags.data, "CSV input");
        sub->add_option("--criterion", eflags.criterion, "minimax | mixed_minimax | both");
        auto* tau = sub->add_option("--tau", eflags.tau, "smooth-max temperature");
        auto* eps = sub->add_option("--epsilon", eflags.epsilon, "smooth-max error; tau = log(m)/epsilon");
        tau->excludes(eps);
        sub->add_option("--bootstrap", eflags.bootstrap, "bootstrap resamples");
        sub->add_option("--level", eflags.level, "confidence level");
        sub->add_option("--functional", eflags.functional, "target functional");
        sub->add_option("--S", eflags.S, "number of splits");
        sub->add_option("--split-kind", eflags.split_kind, "vfold | repeated_half");
        sub->add_option("--M1", eflags.M1, "propensity truncation");
        sub->add_option("--M2", eflags.M2, "outcome bound");
        sub->add_option("--arm", eflags.arm, "counterfactual arm");
        sub->add_option("--mnar-alpha", eflags.mnar_alpha, "selection parameter for mnar_mean");
        sub->add_flag("--retune", eflags.retune, "rerun inner CV tuning in every bootstrap resample");
    };
    const auto add_simulation = [&](CLI::App* sub, std::size_t reps, const std::string& methods, std::size_t boot) {
        sflags.reps = reps;
        sflags.methods = methods;
        sflags.bootstrap = boot;
        sub->add_option("--n", sflags.n, "sample size")->capture_default_str();
        sub->add_option("--reps", sflags.reps, "replications")->capture_default_str();
        sub->add_option("--methods", sflags.methods, "comma list of methods")->capture_default_str();
        sub->add_option("--bootstrap", sflags.bootstrap, "bootstrap resamples per rep")->capture_default_str();
        sub->add_option("--tau", sflags.tau, "smooth-max temperature (default log 9)");
        sub->add_option("--functional", sflags.functional, "ate | counterfactual_mean")->capture_default_str();
        sub->add_option("--arm", sflags.arm, "counterfactual arm")->capture_default_str();
        sub->add_option("--S", sflags.S, "number of splits")->capture_default_str();
        sub->add_flag("--retune", sflags.retune, "rerun inner CV tuning in every bootstrap resample");
    };

    auto* estimate = app.add_subcommand("estimate", "select a learner pair and estimate the functional");
    add_common(estimate);
    add_estimation(estimate);
    auto* risk = app.add_subcommand("risk-grid", "psi grid, pseudo-risk surfaces and selections");
    add_common(risk);
    add_estimation(risk);
    risk->add_option("--grid-in", grid_in, "JSON with a precomputed \"psi_grid\"");
    auto* simulate = app.add_subcommand("simulate", "simulation study with table1.csv and table2.csv");
    add_common(simulate);
    add_simulation(simulate, 200, "minimax,mixed_minimax,ddml_l1,ddml_forest,ddml_gbt", 0);
    auto* check = app.add_subcommand("bootstrap-check", "coverage of the smooth-max bootstrap intervals");
    add_common(check);
    // Options of simulate and bootstrap-check share storage; only one runs.
    check->add_option("--n", sflags.n, "sample size");
    check->add_option("--reps", sflags.reps, "replications (default 50)");
    check->add_option("--bootstrap", sflags.bootstrap, "bootstrap resamples per rep (default 200)");
    check->add_option("--tau", sflags.tau, "smooth-max temperature (default log 9)");
    check->add_flag("--retune", sflags.retune, "rerun inner CV tuning in every bootstrap resample");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForVersion& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            print_error("usage", e.what());
            return kExitValidation;
        }
        set_max_threads(common.threads ? common.threads : std::max(1u, std::thread::hardware_concurrency()));

        if (estimate->parsed()) return cmd_estimate(common, eflags);
        if (risk->parsed()) return cmd_risk_grid(common, eflags, grid_in);
        if (simulate->parsed()) return cmd_simulate(common, sflags, "simulate");
        if (check->parsed()) {
            if (check->count("--reps") == 0) sflags.reps = 50;
            if (check->count("--bootstrap") == 0) sflags.bootstrap = 200;
            sflags.methods = "minimax,mixed_minimax";
            return cmd_simulate(common, sflags, "bootstrap-check");
        }
        return kExitValidation;
    } catch (const ValidationError& e) {
        print_error(e.kind(), e.what());
        return kExitValidation;
    } catch (const EstimationError& e) {
        print_error(e.kind(), e.what());
        return kExitEstimation;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return kExitEstimation;
    }
}

}  // namespace drselect::cli

#include "drselect/simulation/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drselect/core/error.hpp"
#include "drselect/core/parallel.hpp"
#include "drselect/core/seed.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/inference/bootstrap.hpp"
#include "drselect/inference/smooth_max.hpp"
#include "drselect/selector/pipeline.hpp"
#include "drselect/simulation/ddml.hpp"
#include "drselect/simulation/dgp.hpp"

namespace drselect::sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Method ddml_method(std::string name, learners::Family p, learners::Family b) {
    Method m;
    m.name = std::move(name);
    m.kind = MethodKind::ddml;
    m.p = learners::default_spec(p, learners::Role::propensity);
    m.b = learners::default_spec(b, learners::Role::outcome);
    return m;
}

std::string csv_number(double v) { return io::format_number(v); }

}  // namespace

Method parse_method(std::string_view name) {
    using learners::Family;
    if (name == "minimax") return Method{"minimax", MethodKind::minimax, {}, {}};
    if (name == "mixed_minimax") return Method{"mixed_minimax", MethodKind::mixed_minimax, {}, {}};
    if (name == "ddml_l1") return ddml_method("ddml_l1", Family::poly_l1, Family::poly_l1);
    if (name == "ddml_forest") return ddml_method("ddml_forest", Family::random_forest_cls, Family::random_forest_reg);
    if (name == "ddml_gbt") return ddml_method("ddml_gbt", Family::gbt_cls, Family::gbt_reg);
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::vector<Method> parse_methods(std::string_view list) {
    std::vector<Method> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = list.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? list.size() : comma;
        std::string_view item = list.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.push_back(parse_method(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw ConfigError("no methods given");
    return out;
}

const MethodSummary& ExperimentReport::summary(std::string_view name) const {
    for (const auto& s : summaries)
        if (s.name == name) return s;
    throw ContractError("no summary for method '" + std::string(name) + "'");
}

namespace {

RepRecord run_rep(const ExperimentPlan& plan, const functionals::FunctionalDef& def, std::size_t rep) {
    RepRecord rec;
    rec.rep = rep;
    const std::size_t M = plan.methods.size();
    rec.estimate.assign(M, kNaN);
    rec.lo.assign(M, kNaN);
    rec.hi.assign(M, kNaN);
    rec.selected.assign(M, "");
    const std::uint64_t rep_seed = derive_seed(plan.seed, {seed_tag::replicate, rep});
    DgpSpec spec;
    spec.n = plan.n;
    spec.seed = derive_seed(rep_seed, {seed_tag::synthetic});
    const Dataset data = generate(spec);

    bool need_selection = false;
    for (const auto& m : plan.methods) need_selection |= m.kind != MethodKind::ddml;

    std::vector<inference::BootstrapResult> boot;
    selector::SelectionReport sel;
    std::vector<Criterion> criteria;
    std::vector<double> taus;
    if (need_selection) {
        selector::PipelineOptions o;
        o.S = plan.S;
        o.split_kind = plan.split_kind;
        o.seed = rep_seed;
        o.M1 = plan.M1;
        sel = selector::run_selection(data, plan.library, def, o);
        for (const auto& m : plan.methods) {
            if (m.kind == MethodKind::ddml) continue;
            criteria.push_back(m.kind == MethodKind::minimax ? Criterion::minimax : Criterion::mixed_minimax);
            taus.push_back(plan.tau);
        }
        if (plan.bootstrap_reps > 0) {
            inference::BootstrapPlan bp;
            bp.reps = plan.bootstrap_reps;
            bp.level = plan.level;
            bp.retune = plan.retune;
            boot = inference::bootstrap_ci(data, plan.library, def, o, sel, criteria, taus, bp);
        }
    }

    std::size_t c = 0;
    for (std::size_t m = 0; m < M; ++m) {
        const Method& method = plan.methods[m];
        if (method.kind == MethodKind::ddml) {
            DdmlOptions d;
            d.M1 = plan.M1;
            d.level = plan.level;
            const DdmlResult r = ddml_crossfit(data, method.p, method.b, def, derive_seed(rep_seed, {seed_tag::ddml, m}), d);
            rec.estimate[m] = r.estimate;
            rec.lo[m] = r.lo;
            rec.hi[m] = r.hi;
            continue;
        }
        const auto& choice = sel.choice(criteria[c]);
        rec.estimate[m] = choice.estimate;
        rec.selected[m] = std::to_string(choice.selection.k) + "," + std::to_string(choice.selection.l);
        if (!boot.empty()) {
            rec.lo[m] = boot[c].lo;
            rec.hi[m] = boot[c].hi;
        }
        ++c;
    }
    return rec;
}

}  // namespace

std::vector<MethodSummary> summarize(const std::vector<Method>& methods, const std::vector<RepRecord>& records,
                                     double truth) {
    std::vector<MethodSummary> out(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        MethodSummary& s = out[m];
        s.name = methods[m].name;
        std::vector<double> abs_bias;
        double sum_bias = 0.0;
        double sum_sq = 0.0;
        std::size_t with_ci = 0;
        std::size_t below = 0;
        std::size_t above = 0;
        double width = 0.0;
        for (const auto& r : records) {
            if (r.failed) continue;
            const double e = r.estimate[m] - truth;
            sum_bias += e;
            sum_sq += e * e;
            abs_bias.push_back(std::abs(e));
            if (std::isfinite(r.lo[m]) && std::isfinite(r.hi[m])) {
                ++with_ci;
                if (truth < r.lo[m]) ++below;
                if (truth > r.hi[m]) ++above;
                width += r.hi[m] - r.lo[m];
            }
        }
        s.reps = abs_bias.size();
        if (s.reps == 0) continue;
        const double n = static_cast<double>(s.reps);
        s.mean_bias = sum_bias / n;
        double total_abs = 0.0;
        for (double v : abs_bias) total_abs += v;
        s.mean_abs_bias = total_abs / n;
        std::sort(abs_bias.begin(), abs_bias.end());
        s.median_abs_bias = inference::quantile_sorted(abs_bias, 0.5);
        s.rmse = std::sqrt(sum_sq / n);
        s.has_interval = with_ci > 0;
        if (s.has_interval) {
            const double k = static_cast<double>(with_ci);
            s.lower_error = static_cast<double>(below) / k;
            s.upper_error = static_cast<double>(above) / k;
            s.mean_width = width / k;
            s.coverage = 1.0 - s.lower_error - s.upper_error;
        }
    }
    double baseline = kNaN;
    for (const auto& s : out)
        if (s.name == "mixed_minimax") baseline = s.mean_abs_bias;
    for (auto& s : out) s.relative_abs_bias = baseline > 0.0 ? s.mean_abs_bias / baseline : kNaN;
    return out;
}

ExperimentReport run_experiment(const ExperimentPlan& plan, const ProgressFn& progress) {
    if (plan.methods.empty()) throw ConfigError("experiment: no methods");
    if (plan.reps == 0) throw ConfigError("experiment: reps must be positive");
    const auto def = functionals::make_functional(plan.functional, std::nullopt, plan.arm);
    ExperimentReport report;
    report.plan = plan;
    report.truth = true_psi(plan.functional, plan.arm);
    report.records.resize(plan.reps);
    parallel_for(plan.reps, [&](std::size_t rep) {
        try {
            report.records[rep] = run_rep(plan, def, rep);
        } catch (const EstimationError& e) {
            report.records[rep].rep = rep;
            report.records[rep].failed = true;
            report.records[rep].error = e.what();
        }
        if (progress) progress(rep);
    });
    for (const auto& r : report.records) report.failures += r.failed ? 1 : 0;
    if (static_cast<double>(report.failures) > plan.max_failure_fraction * static_cast<double>(plan.reps)) {
        throw EstimationError("experiment: " + std::to_string(report.failures) + " of " +
                                  std::to_string(plan.reps) + " reps failed",
                              "experiment");
    }
    report.summaries = summarize(plan.methods, report.records, report.truth);
    return report;
}

std::string table1_csv(const ExperimentReport& report) {
    std::string out = "method,n,reps,mean_bias,mean_abs_bias,median_abs_bias,rmse,relative_abs_bias\n";
    for (const auto& s : report.summaries) {
        out += s.name + "," + std::to_string(report.plan.n) + "," + std::to_string(s.reps) + "," +
               csv_number(s.mean_bias) + "," + csv_number(s.mean_abs_bias) + "," + csv_number(s.median_abs_bias) +
               "," + csv_number(s.rmse) + "," + csv_number(s.relative_abs_bias) + "\n";
    }
    return out;
}

std::string table2_csv(const ExperimentReport& report) {
    std::string out = "method,L,U,W,C\n";
    for (const auto& s : report.summaries) {
        if (!s.has_interval) {
            out += s.name + ",,,,\n";
            continue;
        }
        out += s.name + "," + csv_number(s.lower_error) + "," + csv_number(s.upper_error) + "," +
               csv_number(s.mean_width) + "," + csv_number(s.coverage) + "\n";
    }
    return out;
}

io::Json experiment_json(const ExperimentReport& report) {
    io::Json j;
    j["n"] = report.plan.n;
    j["reps"] = report.plan.reps;
    j["functional"] = std::string(to_string(report.plan.functional));
    j["truth"] = report.truth;
    j["tau"] = report.plan.tau;
    j["bootstrap_reps"] = report.plan.bootstrap_reps;
    j["failures"] = report.failures;
    io::Json methods = io::Json::array();
    for (const auto& s : report.summaries) {
        io::Json m;
        m["name"] = s.name;
        m["reps"] = s.reps;
        m["mean_bias"] = s.mean_bias;
        m["mean_abs_bias"] = s.mean_abs_bias;
        m["median_abs_bias"] = s.median_abs_bias;
        m["rmse"] = s.rmse;
        m["relative_abs_bias"] = s.relative_abs_bias;
        if (s.has_interval) {
            m["L"] = s.lower_error;
            m["U"] = s.upper_error;
            m["W"] = s.mean_width;
            m["C"] = s.coverage;
        }
        methods.push_back(std::move(m));
    }
    j["methods"] = std::move(methods);
    io::Json reps = io::Json::array();
    for (const auto& r : report.records) {
        io::Json x;
        x["rep"] = r.rep;
        if (r.failed) {
            x["error"] = r.error;
        } else {
            x["estimate"] = r.estimate;
            x["lo"] = r.lo;
            x["hi"] = r.hi;
            x["selected"] = r.selected;
        }
        reps.push_back(std::move(x));
    }
    j["replicates"] = std::move(reps);
    return j;
}

void write_experiment(const ExperimentReport& report, const std::filesystem::path& dir, const io::Json& manifest) {
    io::write_text(dir / "table1.csv", table1_csv(report));
    io::write_text(dir / "table2.csv", table2_csv(report));
    io::write_text(dir / "report.json", io::dump(experiment_json(report)));
    io::write_text(dir / "manifest.json", io::dump(manifest));
}

}  // namespace drselect::sim

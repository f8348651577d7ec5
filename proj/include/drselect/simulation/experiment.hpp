#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "drselect/core/config.hpp"
#include "drselect/io/json_out.hpp"
#include "drselect/learners/library.hpp"

namespace drselect::sim {

enum class MethodKind { minimax, mixed_minimax, ddml };

struct Method {
    std::string name;
    MethodKind kind = MethodKind::mixed_minimax;
    learners::LearnerSpec p;  // ddml only
    learners::LearnerSpec b;
};

// minimax, mixed_minimax, ddml_l1 (lasso on x..x^5 for both nuisances),
// ddml_forest, ddml_gbt.
Method parse_method(std::string_view name);
std::vector<Method> parse_methods(std::string_view comma_list);

struct ExperimentPlan {
    std::size_t n = 1000;
    std::size_t reps = 200;
    std::uint64_t seed = 0;
    FunctionalKind functional = FunctionalKind::ate;
    int arm = 1;
    learners::CandidateLibrary library = learners::default_library();
    std::vector<Method> methods;
    std::size_t S = 3;
    SplitKind split_kind = SplitKind::vfold;
    double M1 = 0.01;
    double tau = 2.1972245773362196;  // log 9
    std::size_t bootstrap_reps = 0;
    double level = 0.95;
    bool retune = false;
    double max_failure_fraction = 0.05;
};

struct RepRecord {
    std::size_t rep = 0;
    bool failed = false;
    std::string error;
    std::vector<double> estimate;  // per method
    std::vector<double> lo;        // NaN without an interval
    std::vector<double> hi;
    std::vector<std::string> selected;  // "k,l" for selection methods
};

struct MethodSummary {
    std::string name;
    std::size_t reps = 0;
    double mean_bias = 0.0;
    double mean_abs_bias = 0.0;
    double median_abs_bias = 0.0;
    double rmse = 0.0;
    // mean |bias| over mixed minimax's mean |bias| (NaN without that baseline).
    double relative_abs_bias = 0.0;
    bool has_interval = false;
    double lower_error = 0.0;  // share of reps with truth below the lower limit
    double upper_error = 0.0;  // share of reps with truth above the upper limit
    double mean_width = 0.0;
    double coverage = 0.0;
};

struct ExperimentReport {
    ExperimentPlan plan;
    double truth = 0.0;
    std::vector<RepRecord> records;
    std::vector<MethodSummary> summaries;
    std::size_t failures = 0;

    const MethodSummary& summary(std::string_view name) const;
};

using ProgressFn = std::function<void(std::size_t rep)>;

// One dataset per rep from the simulation design with a derived seed; every
// method runs on it. Fails when more than max_failure_fraction of reps fail.
ExperimentReport run_experiment(const ExperimentPlan& plan, const ProgressFn& progress = {});

std::vector<MethodSummary> summarize(const std::vector<Method>& methods, const std::vector<RepRecord>& records,
                                     double truth);

// table1.csv (bias), table2.csv (L, U, W, C) and report.json.
void write_experiment(const ExperimentReport& report, const std::filesystem::path& dir, const io::Json& manifest);

std::string table1_csv(const ExperimentReport& report);
std::string table2_csv(const ExperimentReport& report);
io::Json experiment_json(const ExperimentReport& report);

}  // namespace drselect::sim

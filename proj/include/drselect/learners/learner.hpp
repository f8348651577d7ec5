#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drselect/core/dataset.hpp"

namespace drselect::learners {

enum class Family {
    l1_logistic,
    l1_linear,
    random_forest_cls,
    random_forest_reg,
    gbt_cls,
    gbt_reg,
    poly_l1,
    constant,
    oracle_sim,
};

enum class Role { propensity, outcome };

Family parse_family(std::string_view s);
std::string_view to_string(Family f);
std::string_view to_string(Role r);
bool is_classifier(Family f);
bool is_regressor(Family f);

// One point of a tuning grid: named hyper-parameters.
struct TuningPoint {
    std::vector<std::pair<std::string, double>> params;

    std::optional<double> get(std::string_view name) const;
    double get_or(std::string_view name, double fallback) const;
    std::string describe() const;
};

// A grid is the Cartesian product of its dimensions; the first dimension
// varies slowest. Declaration order of the product decides tuning ties.
struct GridDimension {
    std::string name;
    std::vector<double> values;
};

struct LearnerSpec {
    Family family = Family::constant;
    Role role = Role::outcome;
    std::string label;
    std::vector<GridDimension> grid;
    std::size_t cv_folds = 10;

    std::vector<TuningPoint> points() const;
    void set_dimension(std::string name, std::vector<double> values);
    void validate() const;
};

// Defaults for each family: the 13-point lambda grid 10^-2..10^10 with 10-fold
// CV for the L1 families; 500 trees, node size 1 (classification) or 5
// (regression) and mtry = ceil(sqrt(d)) for forests; ntrees {100,300} x depth
// {1..4} x shrinkage {0.001,0.01,0.1} with 4-fold CV for boosting.
LearnerSpec default_spec(Family family, Role role, std::string label = {});

enum class ResponseTransform { identity, y_exp_neg_alpha, exp_neg_alpha };

// What a fit estimates: pr(A=1|X), or E[g(Y) | X] optionally within arm A=a.
struct FitTarget {
    Role kind = Role::outcome;
    std::optional<int> arm;
    ResponseTransform transform = ResponseTransform::identity;
    double alpha = 0.0;

    static FitTarget propensity() { return {Role::propensity, std::nullopt, ResponseTransform::identity, 0.0}; }
    static FitTarget outcome(std::optional<int> arm = std::nullopt) {
        return {Role::outcome, arm, ResponseTransform::identity, 0.0};
    }
    std::string describe() const;
};

class Model {
public:
    virtual ~Model() = default;
    virtual double predict(std::span<const double> x) const = 0;
    // Same values as predict() row by row.
    virtual void predict_many(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const;
};

struct Provenance {
    std::string learner;
    std::size_t split = 0;
    std::string tuning;
    bool fallback = false;
    std::vector<std::string> notes;
};

struct FittedNuisance {
    Role kind = Role::outcome;
    std::shared_ptr<const Model> model;
    std::optional<int> arm;
    Provenance provenance;
    TuningPoint tuning;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    // Model output clamped to [lower, upper]: [M1, 1-M1] for propensities,
    // [-M2, M2] for outcomes when M2 is configured.
    double predict(std::span<const double> x) const;
    void predict_rows(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const;
};

struct FitOptions {
    double M1 = 0.01;
    std::optional<double> M2;
    std::size_t split = 0;
    // Skip inner cross-validation and use this grid point.
    std::optional<TuningPoint> fixed_tuning;
};

struct TuneResult {
    std::size_t index = 0;
    TuningPoint point;
    std::vector<double> losses;  // mean held-out loss per grid point
    std::vector<std::string> warnings;
};

// Inner K-fold CV over the spec's grid: squared error for regression,
// log-loss for 0/1 responses; ties go to the earliest grid point.
TuneResult cv_tune(const LearnerSpec& spec, const Dataset& data, std::span<const std::size_t> rows,
                   const FitTarget& target, std::uint64_t seed);

FittedNuisance fit(const LearnerSpec& spec, const Dataset& data, std::span<const std::size_t> rows,
                   const FitTarget& target, std::uint64_t seed, const FitOptions& options = {});

// Response values of `rows` for `target` (after arm filtering, which the
// caller performs). Throws FitError on non-finite values.
std::vector<double> target_response(const Dataset& data, std::span<const std::size_t> rows, const FitTarget& target);

std::vector<std::size_t> rows_for_target(const Dataset& data, std::span<const std::size_t> rows,
                                         const FitTarget& target);

}  // namespace drselect::learners

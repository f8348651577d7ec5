#include "drselect/learners/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "drselect/core/error.hpp"
#include "drselect/core/seed.hpp"
#include "drselect/core/splits.hpp"
#include "drselect/learners/boosting.hpp"
#include "drselect/learners/design.hpp"
#include "drselect/learners/forest.hpp"
#include "drselect/learners/lasso.hpp"
#include "drselect/simulation/dgp.hpp"

namespace drselect::learners {

Family parse_family(std::string_view s) {
    if (s == "l1_logistic") return Family::l1_logistic;
    if (s == "l1_linear") return Family::l1_linear;
    if (s == "random_forest_cls") return Family::random_forest_cls;
    if (s == "random_forest_reg") return Family::random_forest_reg;
    if (s == "gbt_cls") return Family::gbt_cls;
    if (s == "gbt_reg") return Family::gbt_reg;
    if (s == "poly_l1") return Family::poly_l1;
    if (s == "constant") return Family::constant;
    if (s == "oracle_sim") return Family::oracle_sim;
    throw ConfigError("unknown learner family '" + std::string(s) + "'");
}

std::string_view to_string(Family f) {
    switch (f) {
        case Family::l1_logistic: return "l1_logistic";
        case Family::l1_linear: return "l1_linear";
        case Family::random_forest_cls: return "random_forest_cls";
        case Family::random_forest_reg: return "random_forest_reg";
        case Family::gbt_cls: return "gbt_cls";
        case Family::gbt_reg: return "gbt_reg";
        case Family::poly_l1: return "poly_l1";
        case Family::constant: return "constant";
        case Family::oracle_sim: return "oracle_sim";
    }
    return "?";
}

std::string_view to_string(Role r) { return r == Role::propensity ? "propensity" : "outcome"; }

bool is_classifier(Family f) {
    return f == Family::l1_logistic || f == Family::random_forest_cls || f == Family::gbt_cls;
}

bool is_regressor(Family f) {
    return f == Family::l1_linear || f == Family::random_forest_reg || f == Family::gbt_reg;
}

std::optional<double> TuningPoint::get(std::string_view name) const {
    for (const auto& [k, v] : params) {
        if (k == name) return v;
    }
    return std::nullopt;
}

double TuningPoint::get_or(std::string_view name, double fallback) const { return get(name).value_or(fallback); }

std::string TuningPoint::describe() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (k) os << ',';
        os << params[k].first << '=' << params[k].second;
    }
    return os.str();
}

std::vector<TuningPoint> LearnerSpec::points() const {
    std::vector<TuningPoint> out{TuningPoint{}};
    for (const auto& dim : grid) {
        std::vector<TuningPoint> next;
        for (const auto& base : out) {
            for (double v : dim.values) {
                TuningPoint p = base;
                p.params.emplace_back(dim.name, v);
                next.push_back(std::move(p));
            }
        }
        out = std::move(next);
    }
    return out;
}

void LearnerSpec::set_dimension(std::string name, std::vector<double> values) {
    for (auto& dim : grid) {
        if (dim.name == name) {
            dim.values = std::move(values);
            return;
        }
    }
    grid.push_back({std::move(name), std::move(values)});
}

void LearnerSpec::validate() const {
    if (role == Role::propensity && is_regressor(family)) {
        throw ConfigError("learner '" + label + "': regression family " + std::string(to_string(family)) +
                          " cannot model a propensity");
    }
    for (const auto& dim : grid) {
        if (dim.values.empty()) throw ConfigError("learner '" + label + "': empty grid for '" + dim.name + "'");
    }
    if (cv_folds < 2) throw ConfigError("learner '" + label + "': cv folds must be >= 2");
}

LearnerSpec default_spec(Family family, Role role, std::string label) {
    LearnerSpec spec;
    spec.family = family;
    spec.role = role;
    spec.label = label.empty() ? std::string(to_string(family)) : std::move(label);
    switch (family) {
        case Family::l1_logistic:
        case Family::l1_linear:
        case Family::poly_l1: {
            std::vector<double> lambdas;
            for (int e = -2; e <= 10; ++e) lambdas.push_back(std::pow(10.0, e));
            spec.grid.push_back({"lambda", lambdas});
            if (family == Family::poly_l1) spec.grid.push_back({"degree", {5.0}});
            spec.cv_folds = 10;
            break;
        }
        case Family::random_forest_cls:
        case Family::random_forest_reg:
            spec.grid.push_back({"trees", {500.0}});
            spec.grid.push_back({"min_node", {family == Family::random_forest_cls ? 1.0 : 5.0}});
            spec.grid.push_back({"mtry", {0.0}});
            break;
        case Family::gbt_cls:
        case Family::gbt_reg:
            spec.grid.push_back({"ntrees", {100.0, 300.0}});
            spec.grid.push_back({"depth", {1.0, 2.0, 3.0, 4.0}});
            spec.grid.push_back({"shrinkage", {0.001, 0.01, 0.1}});
            spec.cv_folds = 4;
            break;
        case Family::constant:
            break;
        case Family::oracle_sim:
            spec.grid.push_back({"bias", {0.0}});
            spec.grid.push_back({"direction", {0.0}});
            break;
    }
    return spec;
}

std::string FitTarget::describe() const {
    std::string s(to_string(kind));
    if (arm) s += "[A=" + std::to_string(*arm) + "]";
    if (transform == ResponseTransform::y_exp_neg_alpha) s += ":Y*exp(-alpha*Y)";
    if (transform == ResponseTransform::exp_neg_alpha) s += ":exp(-alpha*Y)";
    return s;
}

double FittedNuisance::predict(std::span<const double> x) const {
    return std::clamp(model->predict(x), lower, upper);
}

void Model::predict_many(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const {
    for (std::size_t k = 0; k < rows.size(); ++k) out[k] = predict(data.row(rows[k]));
}

void FittedNuisance::predict_rows(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const {
    model->predict_many(data, rows, out);
    for (std::size_t k = 0; k < rows.size(); ++k) out[k] = std::clamp(out[k], lower, upper);
}

namespace {

class ConstantModel final : public Model {
public:
    explicit ConstantModel(double v) : value_(v) {}
    double predict(std::span<const double>) const override { return value_; }

private:
    double value_;
};

class LinearModel final : public Model {
public:
    LinearModel(LinearFit fit, int degree, bool logistic) : fit_(std::move(fit)), degree_(degree), logistic_(logistic) {}
    double predict(std::span<const double> x) const override {
        double eta;
        if (degree_ > 1) {
            thread_local std::vector<double> buf;
            expand_row(x, degree_, buf);
            eta = fit_.linear_predictor(buf);
        } else {
            eta = fit_.linear_predictor(x);
        }
        return logistic_ ? 1.0 / (1.0 + std::exp(-eta)) : eta;
    }

private:
    LinearFit fit_;
    int degree_;
    bool logistic_;
};

class ForestModel final : public Model {
public:
    explicit ForestModel(RandomForest f) : forest_(std::move(f)) {}
    double predict(std::span<const double> x) const override { return forest_.predict(x); }
    void predict_many(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const override {
        forest_.predict_many(data, rows, out);
    }

private:
    RandomForest forest_;
};

class BoostModel final : public Model {
public:
    explicit BoostModel(GradientBoosting b) : boost_(std::move(b)) {}
    double predict(std::span<const double> x) const override { return boost_.predict(x); }
    void predict_many(const Dataset& data, std::span<const std::size_t> rows, std::span<double> out) const override {
        boost_.predict_many(data, rows, out);
    }

private:
    GradientBoosting boost_;
};

// Truth of the simulation design, optionally shifted by bias * direction(x)
// where |direction(x)| lies in [0.5, 1.5].
class OracleModel final : public Model {
public:
    OracleModel(FitTarget target, double bias, std::uint64_t direction) : target_(std::move(target)), bias_(bias) {
        if (direction == 0) return;
        Rng rng(derive_seed(direction, {seed_tag::synthetic}));
        std::normal_distribution<double> z(0.0, 1.0);
        sign_ = z(rng) < 0.0 ? -1.0 : 1.0;
        double norm = 0.0;
        for (double& c : coef_) {
            c = z(rng);
            norm += std::abs(c);
        }
        for (double& c : coef_) c /= norm;
    }

    double predict(std::span<const double> x) const override {
        double base;
        if (target_.kind == Role::propensity) {
            base = sim::true_propensity(x);
        } else if (target_.arm) {
            base = sim::true_outcome(x, *target_.arm);
        } else {
            base = sim::true_marginal_outcome(x);
        }
        if (bias_ == 0.0) return base;
        double u = 0.0;
        for (std::size_t j = 0; j < sim::kDgpDim; ++j) u += coef_[j] * (2.0 * sim::bump(x[j]) - 1.0);
        return base + bias_ * sign_ * (1.0 + 0.5 * u);
    }

private:
    FitTarget target_;
    double bias_;
    double sign_ = 1.0;
    std::array<double, sim::kDgpDim> coef_{};
};

bool uses_logit(Family family, bool binary) {
    if (family == Family::l1_logistic) return true;
    if (family == Family::poly_l1) return binary;
    return false;
}

int poly_degree(Family family, const TuningPoint& p) {
    return family == Family::poly_l1 ? static_cast<int>(p.get_or("degree", 5.0)) : 1;
}

std::size_t as_count(double v) { return v <= 0.0 ? 0 : static_cast<std::size_t>(std::llround(v)); }

BoostParams boost_params(const TuningPoint& p) {
    BoostParams bp;
    bp.ntrees = as_count(p.get_or("ntrees", 100.0));
    bp.depth = static_cast<int>(p.get_or("depth", 1.0));
    bp.shrinkage = p.get_or("shrinkage", 0.1);
    bp.bag_fraction = p.get_or("bag_fraction", 0.5);
    bp.min_child_size = as_count(p.get_or("min_node", 10.0));
    return bp;
}

ForestParams forest_params(const TuningPoint& p, Family family) {
    ForestParams fp;
    fp.trees = std::max<std::size_t>(1, as_count(p.get_or("trees", 500.0)));
    fp.min_node_size = as_count(p.get_or("min_node", family == Family::random_forest_cls ? 1.0 : 5.0));
    fp.mtry = as_count(p.get_or("mtry", 0.0));
    return fp;
}

double mean_of(std::span<const double> y) {
    return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

std::shared_ptr<const Model> train(Family family, bool binary, const TuningPoint& point, const Dataset& data,
                                   std::span<const std::size_t> rows, std::span<const double> y, std::uint64_t seed) {
    switch (family) {
        case Family::constant:
            return std::make_shared<ConstantModel>(point.get("value").value_or(mean_of(y)));
        case Family::l1_logistic:
        case Family::l1_linear:
        case Family::poly_l1: {
            const int deg = poly_degree(family, point);
            const ColMatrix X = gather_design(data, rows, deg);
            const double lambda = point.get_or("lambda", 0.01);
            const bool logit = uses_logit(family, binary);
            auto path = lasso_path(X, y, std::span<const double>(&lambda, 1), logit ? LinkKind::logit : LinkKind::identity);
            return std::make_shared<LinearModel>(std::move(path.front()), deg, logit);
        }
        case Family::random_forest_cls:
        case Family::random_forest_reg: {
            const ColMatrix X = gather_design(data, rows);
            return std::make_shared<ForestModel>(RandomForest::fit(X, y, forest_params(point, family), seed));
        }
        case Family::gbt_cls:
        case Family::gbt_reg: {
            const ColMatrix X = gather_design(data, rows);
            const BoostLoss loss = family == Family::gbt_cls ? BoostLoss::bernoulli : BoostLoss::squared;
            return std::make_shared<BoostModel>(GradientBoosting::fit(X, y, loss, boost_params(point), seed));
        }
        case Family::oracle_sim:
            break;
    }
    throw ContractError("train: oracle_sim is not trained");
}

double point_loss(bool binary, double y, double pred) {
    if (binary) {
        const double p = std::clamp(pred, 1e-15, 1.0 - 1e-15);
        return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    }
    const double d = y - pred;
    return d * d;
}

bool all_equal(std::span<const double> y) {
    return std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); });
}

// Held-out loss sums for every grid point on one fold.
std::vector<double> fold_losses(const LearnerSpec& spec, const std::vector<TuningPoint>& points, bool binary,
                                const Dataset& data, std::span<const std::size_t> train_rows,
                                std::span<const double> train_y, std::span<const std::size_t> test_rows,
                                std::span<const double> test_y, std::uint64_t seed) {
    std::vector<double> losses(points.size(), 0.0);
    if (binary && all_equal(train_y)) {
        for (std::size_t i = 0; i < test_rows.size(); ++i) {
            const double l = point_loss(binary, test_y[i], train_y.front());
            for (double& v : losses) v += l;
        }
        return losses;
    }
    const Family family = spec.family;
    if (family == Family::l1_logistic || family == Family::l1_linear || family == Family::poly_l1) {
        // one warm-started path per polynomial degree
        std::vector<int> degrees;
        for (const auto& p : points) {
            const int deg = poly_degree(family, p);
            if (std::find(degrees.begin(), degrees.end(), deg) == degrees.end()) degrees.push_back(deg);
        }
        const bool logit = uses_logit(family, binary);
        std::vector<double> buf;
        for (int deg : degrees) {
            std::vector<std::size_t> idx;
            std::vector<double> lambdas;
            for (std::size_t k = 0; k < points.size(); ++k) {
                if (poly_degree(family, points[k]) == deg) {
                    idx.push_back(k);
                    lambdas.push_back(points[k].get_or("lambda", 0.01));
                }
            }
            const ColMatrix X = gather_design(data, train_rows, deg);
            const auto path = lasso_path(X, train_y, lambdas, logit ? LinkKind::logit : LinkKind::identity);
            for (std::size_t i = 0; i < test_rows.size(); ++i) {
                expand_row(data.row(test_rows[i]), deg, buf);
                for (std::size_t m = 0; m < idx.size(); ++m) {
                    const double eta = path[m].linear_predictor(buf);
                    const double pred = logit ? 1.0 / (1.0 + std::exp(-eta)) : eta;
                    losses[idx[m]] += point_loss(binary, test_y[i], pred);
                }
            }
        }
        return losses;
    }
    if (family == Family::gbt_cls || family == Family::gbt_reg) {
        // points sharing every parameter except ntrees reuse one staged fit
        std::vector<bool> done(points.size(), false);
        const ColMatrix X = gather_design(data, train_rows);
        const BoostLoss loss = family == Family::gbt_cls ? BoostLoss::bernoulli : BoostLoss::squared;
        for (std::size_t k = 0; k < points.size(); ++k) {
            if (done[k]) continue;
            auto strip = [](const TuningPoint& p) {
                TuningPoint q;
                for (const auto& kv : p.params) {
                    if (kv.first != "ntrees") q.params.push_back(kv);
                }
                return q.describe();
            };
            const std::string key = strip(points[k]);
            std::vector<std::size_t> group;
            std::size_t max_trees = 0;
            for (std::size_t m = k; m < points.size(); ++m) {
                if (!done[m] && strip(points[m]) == key) {
                    group.push_back(m);
                    done[m] = true;
                    max_trees = std::max(max_trees, as_count(points[m].get_or("ntrees", 100.0)));
                }
            }
            BoostParams bp = boost_params(points[k]);
            bp.ntrees = max_trees;
            const GradientBoosting model = GradientBoosting::fit(X, train_y, loss, bp, seed);
            for (std::size_t i = 0; i < test_rows.size(); ++i) {
                const auto x = data.row(test_rows[i]);
                for (std::size_t m : group) {
                    const std::size_t stages = std::max<std::size_t>(1, as_count(points[m].get_or("ntrees", 100.0)));
                    losses[m] += point_loss(binary, test_y[i], model.predict(x, stages));
                }
            }
        }
        return losses;
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto model = train(family, binary, points[k], data, train_rows, train_y, seed);
        for (std::size_t i = 0; i < test_rows.size(); ++i) {
            losses[k] += point_loss(binary, test_y[i], model->predict(data.row(test_rows[i])));
        }
    }
    return losses;
}

bool binary_target(const LearnerSpec& spec, const FitTarget& target) {
    return target.kind == Role::propensity || is_classifier(spec.family);
}

}  // namespace

std::vector<std::size_t> rows_for_target(const Dataset& data, std::span<const std::size_t> rows,
                                         const FitTarget& target) {
    if (!target.arm) return {rows.begin(), rows.end()};
    std::vector<std::size_t> out;
    for (std::size_t i : rows) {
        if (data.a(i) == *target.arm) out.push_back(i);
    }
    return out;
}

std::vector<double> target_response(const Dataset& data, std::span<const std::size_t> rows, const FitTarget& target) {
    std::vector<double> y(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = rows[k];
        if (target.kind == Role::propensity) {
            y[k] = data.a(i);
            continue;
        }
        const double yi = data.y(i);
        if (!std::isfinite(yi)) {
            throw FitError("outcome target " + target.describe() + ": non-finite y at row " + std::to_string(i + 1));
        }
        switch (target.transform) {
            case ResponseTransform::identity: y[k] = yi; break;
            case ResponseTransform::y_exp_neg_alpha: y[k] = yi * std::exp(-target.alpha * yi); break;
            case ResponseTransform::exp_neg_alpha: y[k] = std::exp(-target.alpha * yi); break;
        }
    }
    return y;
}

TuneResult cv_tune(const LearnerSpec& spec, const Dataset& data, std::span<const std::size_t> rows,
                   const FitTarget& target, std::uint64_t seed) {
    spec.validate();
    const auto points = spec.points();
    TuneResult result;
    result.losses.assign(points.size(), 0.0);
    if (points.size() == 1) {
        result.point = points.front();
        return result;
    }
    const auto used = rows_for_target(data, rows, target);
    const auto y = target_response(data, used, target);
    const bool binary = binary_target(spec, target);
    std::size_t folds = spec.cv_folds;
    if (used.size() < folds) {
        result.warnings.push_back("cv folds reduced from " + std::to_string(folds) + " to " +
                                  std::to_string(used.size()));
        folds = used.size();
    }
    if (folds < 2) throw FitError("cv_tune: need at least 2 rows to tune '" + spec.label + "'");

    Rng rng(derive_seed(seed, {seed_tag::cv}));
    std::vector<std::size_t> perm(used.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
    std::vector<std::size_t> fold_of(used.size());
    for (std::size_t k = 0; k < perm.size(); ++k) fold_of[perm[k]] = k % folds;

    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> tr_rows, te_rows;
        std::vector<double> tr_y, te_y;
        for (std::size_t k = 0; k < used.size(); ++k) {
            if (fold_of[k] == f) {
                te_rows.push_back(used[k]);
                te_y.push_back(y[k]);
            } else {
                tr_rows.push_back(used[k]);
                tr_y.push_back(y[k]);
            }
        }
        const auto l = fold_losses(spec, points, binary, data, tr_rows, tr_y, te_rows, te_y,
                                   derive_seed(seed, {seed_tag::cv, f + 1}));
        for (std::size_t k = 0; k < points.size(); ++k) result.losses[k] += l[k];
    }
    for (double& v : result.losses) v /= static_cast<double>(used.size());
    std::size_t best = 0;
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (result.losses[k] < result.losses[best]) best = k;
    }
    result.index = best;
    result.point = points[best];
    return result;
}

FittedNuisance fit(const LearnerSpec& spec, const Dataset& data, std::span<const std::size_t> rows,
                   const FitTarget& target, std::uint64_t seed, const FitOptions& options) {
    spec.validate();
    if (spec.role != target.kind) {
        throw ContractError("fit: learner '" + spec.label + "' has role " + std::string(to_string(spec.role)) +
                            " but target is " + target.describe());
    }
    const auto used = rows_for_target(data, rows, target);
    const std::size_t min_rows = spec.family == Family::constant || spec.family == Family::oracle_sim ? 1 : 2;
    if (target.arm && used.size() < min_rows) {
        throw FitError("learner '" + spec.label + "': fewer than " + std::to_string(min_rows) +
                       " training rows with A=" + std::to_string(*target.arm));
    }
    if (used.empty()) throw FitError("learner '" + spec.label + "': empty training set");
    const auto y = target_response(data, used, target);
    const bool binary = binary_target(spec, target);
    if (binary) {
        for (double v : y) {
            if (v != 0.0 && v != 1.0) {
                throw FitError("learner '" + spec.label + "': classification family needs a 0/1 response");
            }
        }
    }

    FittedNuisance out;
    out.kind = target.kind;
    out.arm = target.arm;
    out.provenance.learner = spec.label;
    out.provenance.split = options.split;
    if (target.kind == Role::propensity) {
        out.lower = options.M1;
        out.upper = 1.0 - options.M1;
    } else if (options.M2 && target.transform == ResponseTransform::identity) {
        out.lower = -*options.M2;
        out.upper = *options.M2;
    }

    if (spec.family == Family::oracle_sim) {
        if (target.transform != ResponseTransform::identity) {
            throw FitError("oracle_sim has no closed form for target " + target.describe());
        }
        if (data.d() < sim::kDgpDim) throw FitError("oracle_sim needs at least 5 covariates");
        out.tuning = options.fixed_tuning.value_or(spec.points().front());
        out.model = std::make_shared<OracleModel>(target, out.tuning.get_or("bias", 0.0),
                                                  static_cast<std::uint64_t>(out.tuning.get_or("direction", 0.0)));
        out.provenance.tuning = out.tuning.describe();
        return out;
    }

    if (binary && all_equal(y)) {
        out.model = std::make_shared<ConstantModel>(y.front());
        out.provenance.fallback = true;
        out.provenance.notes.push_back("degenerate response: constant fallback");
        out.provenance.tuning = "constant";
        return out;
    }

    if (options.fixed_tuning) {
        out.tuning = *options.fixed_tuning;
    } else {
        TuneResult tuned = cv_tune(spec, data, used, FitTarget{target.kind, std::nullopt, target.transform, target.alpha},
                                   derive_seed(seed, {seed_tag::cv}));
        out.tuning = tuned.point;
        out.provenance.notes = std::move(tuned.warnings);
    }
    out.provenance.tuning = out.tuning.describe();
    out.model = train(spec.family, binary, out.tuning, data, used, y, seed);
    return out;
}

}  // namespace drselect::learners

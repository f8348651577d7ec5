#include "drselect/functionals/mixed_bias.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "drselect/core/error.hpp"

namespace drselect::functionals {

namespace {

class MeanEquation {
public:
    MeanEquation(const MixedBiasPlugin& plugin, std::span<const double> c, std::span<const double> d,
                 const Dataset& data, std::span<const std::size_t> rows)
        : plugin_(plugin), c_(c), d_(d), data_(data), rows_(rows) {}

    double operator()(double psi) const {
        double total = 0.0;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const std::size_t i = rows_[k];
            total += plugin_.if_eval(c_[k], d_[k], Observation{data_.row(i), data_.a(i), data_.y(i)}, psi);
        }
        const double v = total / static_cast<double>(rows_.size());
        if (!std::isfinite(v)) throw EstimationError("mixed-bias estimating equation is not finite", "evaluation");
        return v;
    }

    // Mean and sd of if_eval at psi = 0.
    std::pair<double, double> moments_at_zero() const {
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const std::size_t i = rows_[k];
            const double v = plugin_.if_eval(c_[k], d_[k], Observation{data_.row(i), data_.a(i), data_.y(i)}, 0.0);
            const double delta = v - mean;
            mean += delta / static_cast<double>(k + 1);
            m2 += delta * (v - mean);
        }
        const double sd = rows_.size() > 1 ? std::sqrt(m2 / static_cast<double>(rows_.size() - 1)) : 0.0;
        return {mean, sd};
    }

private:
    const MixedBiasPlugin& plugin_;
    std::span<const double> c_;
    std::span<const double> d_;
    const Dataset& data_;
    std::span<const std::size_t> rows_;
};

}  // namespace

double solve_mixed_bias(const MixedBiasPlugin& plugin, std::span<const double> c, std::span<const double> d,
                        const Dataset& data, std::span<const std::size_t> rows, const RootOptions& options) {
    if (rows.empty()) throw ContractError("solve_mixed_bias: empty validation set");
    if (c.size() != rows.size() || d.size() != rows.size()) throw ContractError("solve_mixed_bias: size mismatch");
    if (!plugin.if_eval) throw ContractError("solve_mixed_bias: plugin has no estimating function");
    const MeanEquation g(plugin, c, d, data, rows);

    if (plugin.psi_slope) {
        const double slope = *plugin.psi_slope;
        if (slope == 0.0 || !std::isfinite(slope)) throw ContractError("solve_mixed_bias: invalid psi slope");
        return -g(0.0) / slope;
    }

    double lo;
    double hi;
    if (plugin.initial_bracket) {
        std::tie(lo, hi) = *plugin.initial_bracket;
    } else {
        const auto [mean, sd] = g.moments_at_zero();
        const double half = 10.0 * std::max(sd, 1.0);
        lo = mean - half;
        hi = mean + half;
    }
    if (!(lo < hi)) throw ContractError("solve_mixed_bias: bracket must satisfy lo < hi");

    double glo = g(lo);
    double ghi = g(hi);
    int expansions = 0;
    while (glo * ghi > 0.0) {
        if (expansions++ >= options.max_expansions) {
            throw EstimationError("solve_mixed_bias: no sign change after bracket expansion", "root_finding");
        }
        const double width = hi - lo;
        lo -= width;
        hi += width;
        glo = g(lo);
        ghi = g(hi);
    }
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;

    while (hi - lo > options.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double solve_mixed_bias(const MixedBiasPlugin& plugin, const FittedNuisance& c, const FittedNuisance& d,
                        const Dataset& data, std::span<const std::size_t> validation, const RootOptions& options) {
    std::vector<double> cv(validation.size());
    std::vector<double> dv(validation.size());
    c.predict_rows(data, validation, cv);
    d.predict_rows(data, validation, dv);
    return solve_mixed_bias(plugin, cv, dv, data, validation, options);
}

MixedBiasPlugin mar_mean_plugin() {
    MixedBiasPlugin plugin;
    plugin.if_eval = [](double c, double d, const Observation& o, double psi) {
        const double resid = o.a == 1 ? (o.y - d) / c : 0.0;
        return resid + d - psi;
    };
    plugin.psi_slope = -1.0;
    plugin.c_target = FitTarget::propensity();
    plugin.d_target = FitTarget::outcome(1);
    return plugin;
}

}  // namespace drselect::functionals

#include "drselect/learners/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drselect/simd/kernels.hpp"

namespace drselect::learners {

double LinearFit::linear_predictor(std::span<const double> x) const {
    double eta = intercept;
    for (std::size_t j = 0; j < beta.size(); ++j) eta += beta[j] * x[j];
    return eta;
}

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

namespace {

struct Standardized {
    ColMatrix z;
    std::vector<double> mean;
    std::vector<double> scale;
    std::vector<std::size_t> active;  // columns with non-zero spread
};

Standardized standardize(const ColMatrix& X) {
    Standardized s;
    s.z = X;
    s.mean.assign(X.p, 0.0);
    s.scale.assign(X.p, 0.0);
    const double n = static_cast<double>(X.n);
    for (std::size_t j = 0; j < X.p; ++j) {
        auto c = s.z.col(j);
        const double m = simd::sum(c) / n;
        const double sd = std::sqrt(simd::sum_sq_dev(c, m) / n);
        s.mean[j] = m;
        if (sd > 1e-12 * std::max(1.0, std::abs(m))) {
            s.scale[j] = sd;
            s.active.push_back(j);
            for (double& v : c) v = (v - m) / sd;
        } else {
            std::fill(c.begin(), c.end(), 0.0);
        }
    }
    return s;
}

LinearFit to_original(const Standardized& s, double intercept, const std::vector<double>& beta) {
    LinearFit f;
    f.beta.assign(beta.size(), 0.0);
    f.intercept = intercept;
    for (std::size_t j : s.active) {
        f.beta[j] = beta[j] / s.scale[j];
        f.intercept -= f.beta[j] * s.mean[j];
    }
    return f;
}

std::vector<std::size_t> descending_order(std::span<const double> lambdas) {
    std::vector<std::size_t> order(lambdas.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lambdas[a] > lambdas[b]; });
    return order;
}

std::vector<LinearFit> gaussian_path(const Standardized& s, std::span<const double> y, std::span<const double> lambdas,
                                     const LassoOptions& opt) {
    const std::size_t n = s.z.n;
    const double nd = static_cast<double>(n);
    const double ybar = simd::sum(y) / nd;
    std::vector<double> r(y.begin(), y.end());
    for (double& v : r) v -= ybar;
    std::vector<double> beta(s.z.p, 0.0);
    std::vector<LinearFit> out(lambdas.size());
    for (std::size_t idx : descending_order(lambdas)) {
        const double lambda = lambdas[idx];
        for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
            double max_change = 0.0;
            for (std::size_t j : s.active) {
                const auto xj = s.z.col(j);
                const double rho = simd::dot(xj, r) / nd + beta[j];
                const double updated = soft_threshold(rho, lambda);
                const double delta = updated - beta[j];
                if (delta != 0.0) {
                    simd::axpy(-delta, xj, r);
                    beta[j] = updated;
                    max_change = std::max(max_change, std::abs(delta));
                }
            }
            if (max_change < opt.tol) break;
        }
        out[idx] = to_original(s, ybar, beta);
    }
    return out;
}

std::vector<LinearFit> logistic_path(const Standardized& s, std::span<const double> y, std::span<const double> lambdas,
                                     const LassoOptions& opt) {
    const std::size_t n = s.z.n;
    const double nd = static_cast<double>(n);
    const double ybar = std::clamp(simd::sum(y) / nd, 1e-6, 1.0 - 1e-6);
    double b0 = std::log(ybar / (1.0 - ybar));
    std::vector<double> beta(s.z.p, 0.0);
    std::vector<double> eta(n), w(n), r(n), xwx(s.z.p, 0.0);
    std::vector<LinearFit> out(lambdas.size());
    for (std::size_t idx : descending_order(lambdas)) {
        const double lambda = lambdas[idx];
        for (int outer = 0; outer < opt.max_irls; ++outer) {
            std::fill(eta.begin(), eta.end(), b0);
            for (std::size_t j : s.active) {
                if (beta[j] != 0.0) simd::axpy(beta[j], s.z.col(j), eta);
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double p = std::clamp(1.0 / (1.0 + std::exp(-eta[i])), 1e-5, 1.0 - 1e-5);
                w[i] = p * (1.0 - p);
                r[i] = (y[i] - p) / w[i];
            }
            const double wsum = simd::sum(w);
            for (std::size_t j : s.active) {
                const auto xj = s.z.col(j);
                xwx[j] = simd::dot3(w, xj, xj) / nd;
            }
            double outer_change = 0.0;
            for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
                double max_change = 0.0;
                const double d0 = simd::dot(w, r) / wsum;
                if (d0 != 0.0) {
                    b0 += d0;
                    for (double& v : r) v -= d0;
                    max_change = std::abs(d0);
                }
                for (std::size_t j : s.active) {
                    if (xwx[j] <= 0.0) continue;
                    const auto xj = s.z.col(j);
                    const double grad = simd::dot3(w, xj, r) / nd + xwx[j] * beta[j];
                    const double updated = soft_threshold(grad, lambda) / xwx[j];
                    const double delta = updated - beta[j];
                    if (delta != 0.0) {
                        simd::axpy(-delta, xj, r);
                        beta[j] = updated;
                        max_change = std::max(max_change, std::abs(delta) * std::sqrt(xwx[j]));
                    }
                }
                outer_change = std::max(outer_change, max_change);
                if (max_change < opt.tol) break;
            }
            if (outer_change < opt.tol) break;
        }
        out[idx] = to_original(s, b0, beta);
    }
    return out;
}

}  // namespace

std::vector<LinearFit> lasso_path(const ColMatrix& X, std::span<const double> y, std::span<const double> lambdas,
                                  LinkKind link, const LassoOptions& options) {
    const Standardized s = standardize(X);
    return link == LinkKind::identity ? gaussian_path(s, y, lambdas, options) : logistic_path(s, y, lambdas, options);
}

}  // namespace drselect::learners

#include "drselect/simulation/dgp.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "drselect/core/error.hpp"
#include "drselect/core/seed.hpp"

namespace drselect::sim {

namespace {
constexpr std::array<double, kDgpDim> kPsCoef{1.0, -1.0, 1.0, -1.0, 1.0};

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
}  // namespace

double bump(double xj) { return 1.0 / (1.0 + std::exp(-20.0 * (xj - 0.5))); }

double bump_sum(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t j = 0; j < kDgpDim; ++j) s += bump(x[j]);
    return s;
}

double true_propensity(std::span<const double> x) {
    double eta = 0.0;
    for (std::size_t j = 0; j < kDgpDim; ++j) eta += kPsCoef[j] * bump(x[j]);
    return logistic(eta);
}

double true_outcome(std::span<const double> x, int arm) {
    const double s = bump_sum(x);
    return 2.0 * (1.0 + s + s * arm + arm);
}

double true_marginal_outcome(std::span<const double> x) {
    const double p = true_propensity(x);
    return p * true_outcome(x, 1) + (1.0 - p) * true_outcome(x, 0);
}

Dataset generate(const DgpSpec& spec) {
    if (spec.n < 2) throw ContractError("generate: n must be >= 2");
    Rng rng(spec.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> x(spec.n * kDgpDim);
    std::vector<std::uint8_t> a(spec.n);
    std::vector<double> y(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double* xi = x.data() + i * kDgpDim;
        for (std::size_t j = 0; j < kDgpDim; ++j) xi[j] = unif(rng);
        double eta = 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < kDgpDim; ++j) {
            const double f = bump(xi[j]);
            eta += spec.ps_coef[j] * f;
            s += f;
        }
        const int ai = unif(rng) < logistic(eta) ? 1 : 0;
        a[i] = static_cast<std::uint8_t>(ai);
        const double mean = spec.outcome_scale * (1.0 + s + s * ai + ai);
        y[i] = mean + noise(rng);
    }
    return Dataset(std::move(x), std::move(a), std::move(y), kDgpDim);
}

double true_psi(FunctionalKind kind, int arm) {
    switch (kind) {
        case FunctionalKind::ate: return 7.0;
        case FunctionalKind::counterfactual_mean:
            if (arm == 1) return 14.0;
            if (arm == 0) return 7.0;
            break;
        default: break;
    }
    throw ContractError("true_psi: only ate and counterfactual_mean have closed forms under the design");
}

MonteCarloEstimate monte_carlo_psi(FunctionalKind kind, int arm, std::size_t draws, std::uint64_t seed) {
    if (kind != FunctionalKind::ate && kind != FunctionalKind::counterfactual_mean) {
        throw ContractError("monte_carlo_psi: unsupported functional");
    }
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::array<double, kDgpDim> x{};
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
        for (double& v : x) v = unif(rng);
        const double v = kind == FunctionalKind::ate ? true_outcome(x, 1) - true_outcome(x, 0) : true_outcome(x, arm);
        const double delta = v - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (v - mean);
    }
    const double var = draws > 1 ? m2 / static_cast<double>(draws - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(draws))};
}

MonteCarloEstimate monte_carlo_treatment_rate(std::size_t draws, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::array<double, kDgpDim> x{};
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
        for (double& v : x) v = unif(rng);
        const double v = true_propensity(x);
        const double delta = v - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (v - mean);
    }
    return {mean, std::sqrt(m2 / static_cast<double>(draws - 1) / static_cast<double>(draws))};
}

}  // namespace drselect::sim

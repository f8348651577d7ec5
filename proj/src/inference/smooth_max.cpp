#include "drselect/inference/smooth_max.hpp"

#include <algorithm>
#include <cmath>

#include "drselect/core/error.hpp"
#include "drselect/selector/pseudo_risk.hpp"

namespace drselect::inference {

using selector::perturbation_hat;
using selector::PsiGrid;

double smooth_max_value(std::span<const double> z, double tau) {
    if (!(tau > 0.0)) throw ContractError("smooth max requires tau > 0");
    if (z.empty()) throw ContractError("smooth max of an empty set");
    const double m = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double v : z) total += std::exp(tau * (v - m));
    return m + std::log(total) / tau;
}

std::size_t term_count(std::size_t K, std::size_t L, Criterion criterion) {
    switch (criterion) {
        case Criterion::minimax: return K + L - 1;
        case Criterion::mixed_minimax: return K * K * L * L;
        case Criterion::both: break;
    }
    throw ContractError("term_count: criterion must be minimax or mixed_minimax");
}

double gamma_smooth(const PsiGrid& grid, std::size_t k0, std::size_t l0, double tau, Criterion criterion) {
    if (!(tau > 0.0)) throw ContractError("gamma_smooth requires tau > 0");
    std::vector<double> z;
    if (criterion == Criterion::minimax) {
        z.reserve(grid.K + grid.L - 1);
        for (std::size_t l = 0; l < grid.L; ++l) z.push_back(perturbation_hat(grid, k0, l, k0, l0));
        for (std::size_t k = 0; k < grid.K; ++k)
            if (k != k0) z.push_back(perturbation_hat(grid, k, l0, k0, l0));
        return smooth_max_value(z, tau);
    }
    if (criterion != Criterion::mixed_minimax) throw ContractError("gamma_smooth: criterion must be single");
    z.reserve(grid.L * grid.L);
    for (std::size_t l1 = 0; l1 < grid.L; ++l1)
        for (std::size_t l2 = 0; l2 < grid.L; ++l2) z.push_back(perturbation_hat(grid, k0, l1, k0, l2));
    const double row = smooth_max_value(z, tau);
    z.clear();
    for (std::size_t k1 = 0; k1 < grid.K; ++k1)
        for (std::size_t k2 = 0; k2 < grid.K; ++k2) z.push_back(perturbation_hat(grid, k1, l0, k2, l0));
    return row + smooth_max_value(z, tau);
}

std::vector<double> gamma_matrix(const PsiGrid& grid, double tau, Criterion criterion) {
    std::vector<double> g(grid.K * grid.L);
    for (std::size_t k = 0; k < grid.K; ++k)
        for (std::size_t l = 0; l < grid.L; ++l) g[k * grid.L + l] = gamma_smooth(grid, k, l, tau, criterion);
    return g;
}

std::vector<double> smooth_weights(std::span<const double> gamma, double tau) {
    if (!(tau > 0.0)) throw ContractError("smooth_weights requires tau > 0");
    if (gamma.empty()) throw ContractError("smooth_weights of an empty matrix");
    const double lo = *std::min_element(gamma.begin(), gamma.end());
    std::vector<double> w(gamma.size());
    double total = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        w[i] = std::exp(-tau * (gamma[i] - lo));
        total += w[i];
    }
    for (double& v : w) v /= total;
    return w;
}

double smooth_psi(std::span<const double> weights, const PsiGrid& grid) {
    if (weights.size() != grid.K * grid.L) throw ContractError("smooth_psi: weight shape mismatch");
    double total = 0.0;
    for (std::size_t k = 0; k < grid.K; ++k)
        for (std::size_t l = 0; l < grid.L; ++l) total += weights[k * grid.L + l] * grid.mean(k, l);
    return total;
}

TauChoice choose_tau(std::size_t m, double epsilon) {
    if (m < 1) throw ContractError("choose_tau requires m >= 1");
    if (!(epsilon > 0.0)) throw ContractError("choose_tau requires epsilon > 0");
    TauChoice out;
    out.m = m;
    if (m == 1) {
        out.tau = 1.0;
        out.defaulted = true;
        return out;
    }
    out.tau = std::log(static_cast<double>(m)) / epsilon;
    if (out.tau > kMaxTau) {
        out.tau = kMaxTau;
        out.capped = true;
    }
    return out;
}

double default_tau(std::size_t K, std::size_t L) {
    const std::size_t m = K * L;
    return m > 1 ? std::log(static_cast<double>(m)) : 1.0;
}

SmoothMaxResult smooth_max(const PsiGrid& grid, double tau, Criterion criterion) {
    SmoothMaxResult out;
    out.criterion = criterion;
    out.tau = std::min(tau, kMaxTau);
    out.K = grid.K;
    out.L = grid.L;
    out.gamma = gamma_matrix(grid, out.tau, criterion);
    out.weights = smooth_weights(out.gamma, out.tau);
    out.psi_tau = smooth_psi(out.weights, grid);
    return out;
}

}  // namespace drselect::inference

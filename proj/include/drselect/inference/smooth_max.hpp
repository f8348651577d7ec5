#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drselect/core/config.hpp"
#include "drselect/selector/psi_grid.hpp"

namespace drselect::inference {

inline constexpr double kMaxTau = 1e8;

// (1/tau) log sum_i exp(tau z_i), evaluated with max subtraction.
double smooth_max_value(std::span<const double> z, double tau);

// Number of exponential terms in Gamma_{k0,l0}: K + L - 1 for minimax, and
// K^2 L^2 for mixed minimax (the two log-sum-exps add, so their term counts
// multiply in the error bound).
std::size_t term_count(std::size_t K, std::size_t L, Criterion criterion);

double gamma_smooth(const selector::PsiGrid& grid, std::size_t k0, std::size_t l0, double tau, Criterion criterion);

// Gamma over all anchors, K x L row-major.
std::vector<double> gamma_matrix(const selector::PsiGrid& grid, double tau, Criterion criterion);

// p_{k,l} proportional to exp(-tau Gamma_{k,l}).
std::vector<double> smooth_weights(std::span<const double> gamma, double tau);

// sum_{k,l} p_{k,l} times the split-averaged psi-hat_{k,l}.
double smooth_psi(std::span<const double> weights, const selector::PsiGrid& grid);

struct TauChoice {
    double tau = 1.0;
    std::size_t m = 1;
    // m = 1: log m / epsilon is zero, tau falls back to 1.
    bool defaulted = false;
    bool capped = false;
};

// tau = log(m) / epsilon, capped at kMaxTau.
TauChoice choose_tau(std::size_t m, double epsilon);

// tau used when neither tau nor epsilon is configured: log(K L), or 1 when
// K L = 1.
double default_tau(std::size_t K, std::size_t L);

struct SmoothMaxResult {
    Criterion criterion = Criterion::minimax;
    double tau = 1.0;
    std::size_t K = 0;
    std::size_t L = 0;
    std::vector<double> gamma;
    std::vector<double> weights;
    double psi_tau = 0.0;
};

SmoothMaxResult smooth_max(const selector::PsiGrid& grid, double tau, Criterion criterion);

}  // namespace drselect::inference

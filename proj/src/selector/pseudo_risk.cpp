#include "drselect/selector/pseudo_risk.hpp"

#include <algorithm>

#include "drselect/core/error.hpp"

namespace drselect::selector {

double perturbation_hat(const PsiGrid& grid, std::size_t k, std::size_t l, std::size_t k0, std::size_t l0) {
    double total = 0.0;
    for (std::size_t s = 0; s < grid.S; ++s) {
        const double d = grid.at(s, k, l) - grid.at(s, k0, l0);
        total += d * d;
    }
    return total / static_cast<double>(grid.S);
}

const std::vector<double>& PseudoRiskSurface::matrix(Criterion c) const {
    switch (c) {
        case Criterion::minimax: return b1;
        case Criterion::mixed_minimax: return b2;
        case Criterion::both: break;
    }
    throw ContractError("PseudoRiskSurface::matrix: criterion must be minimax or mixed_minimax");
}

std::vector<double> minimax_surface(const PsiGrid& grid) {
    const std::size_t K = grid.K;
    const std::size_t L = grid.L;
    std::vector<double> b1(K * L, 0.0);
    for (std::size_t k0 = 0; k0 < K; ++k0) {
        for (std::size_t l0 = 0; l0 < L; ++l0) {
            double m = 0.0;
            for (std::size_t l = 0; l < L; ++l) m = std::max(m, perturbation_hat(grid, k0, l, k0, l0));
            for (std::size_t k = 0; k < K; ++k) m = std::max(m, perturbation_hat(grid, k, l0, k0, l0));
            b1[k0 * L + l0] = m;
        }
    }
    return b1;
}

PseudoRiskSurface mixed_minimax_surface(const PsiGrid& grid) {
    PseudoRiskSurface out;
    out.K = grid.K;
    out.L = grid.L;
    out.row_term.assign(grid.K, 0.0);
    out.col_term.assign(grid.L, 0.0);
    for (std::size_t k0 = 0; k0 < grid.K; ++k0)
        for (std::size_t l1 = 0; l1 < grid.L; ++l1)
            for (std::size_t l2 = l1 + 1; l2 < grid.L; ++l2)
                out.row_term[k0] = std::max(out.row_term[k0], perturbation_hat(grid, k0, l1, k0, l2));
    for (std::size_t l0 = 0; l0 < grid.L; ++l0)
        for (std::size_t k1 = 0; k1 < grid.K; ++k1)
            for (std::size_t k2 = k1 + 1; k2 < grid.K; ++k2)
                out.col_term[l0] = std::max(out.col_term[l0], perturbation_hat(grid, k1, l0, k2, l0));
    out.b2.resize(grid.K * grid.L);
    for (std::size_t k0 = 0; k0 < grid.K; ++k0)
        for (std::size_t l0 = 0; l0 < grid.L; ++l0) out.b2[k0 * grid.L + l0] = out.row_term[k0] + out.col_term[l0];
    return out;
}

PseudoRiskSurface compute_surface(const PsiGrid& grid) {
    PseudoRiskSurface out = mixed_minimax_surface(grid);
    out.b1 = minimax_surface(grid);
    return out;
}

Selection select(const std::vector<double>& matrix, std::size_t K, std::size_t L) {
    if (matrix.size() != K * L || matrix.empty()) throw ContractError("select: matrix shape mismatch");
    Selection best;
    best.risk = matrix[0];
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t l = 0; l < L; ++l) {
            const double v = matrix[k * L + l];
            if (v < best.risk) {
                best = Selection{k, l, v, 0};
            } else if (v == best.risk && (k != best.k || l != best.l)) {
                ++best.ties;
            }
        }
    }
    return best;
}

Selection select(const PseudoRiskSurface& surface, Criterion criterion) {
    return select(surface.matrix(criterion), surface.K, surface.L);
}

double final_estimate(const PsiGrid& grid, std::size_t k, std::size_t l) { return grid.mean(k, l); }

}  // namespace drselect::selector

#pragma once

#include <cstddef>
#include <vector>

#include "drselect/core/config.hpp"
#include "drselect/selector/psi_grid.hpp"

namespace drselect::selector {

// (1/S) sum_s (psi^s_{k,l} - psi^s_{k0,l0})^2
double perturbation_hat(const PsiGrid& grid, std::size_t k, std::size_t l, std::size_t k0, std::size_t l0);

// K x L matrices stored row-major.
struct PseudoRiskSurface {
    std::size_t K = 0;
    std::size_t L = 0;
    std::vector<double> b1;
    std::vector<double> b2;
    std::vector<double> row_term;  // max_{l1,l2} per(k0,l1; k0,l2)
    std::vector<double> col_term;  // max_{k1,k2} per(k1,l0; k2,l0)

    double b1_at(std::size_t k, std::size_t l) const { return b1[k * L + l]; }
    double b2_at(std::size_t k, std::size_t l) const { return b2[k * L + l]; }
    const std::vector<double>& matrix(Criterion c) const;
};

// Minimax: max of per(.; k0,l0) over {(k0,l)} and {(k,l0)}.
std::vector<double> minimax_surface(const PsiGrid& grid);

// Mixed minimax: row_term[k0] + col_term[l0]; b1 is left empty.
PseudoRiskSurface mixed_minimax_surface(const PsiGrid& grid);

PseudoRiskSurface compute_surface(const PsiGrid& grid);

struct Selection {
    std::size_t k = 0;
    std::size_t l = 0;
    double risk = 0.0;
    // Other anchors attaining the same minimum.
    std::size_t ties = 0;
};

// Argmin over a K x L matrix; ties go to the smallest k, then l.
Selection select(const std::vector<double>& matrix, std::size_t K, std::size_t L);
Selection select(const PseudoRiskSurface& surface, Criterion criterion);

double final_estimate(const PsiGrid& grid, std::size_t k, std::size_t l);

}  // namespace drselect::selector

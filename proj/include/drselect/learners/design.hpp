#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drselect/core/dataset.hpp"

namespace drselect::learners {

// Column-major feature matrix built from selected dataset rows.
struct ColMatrix {
    std::size_t n = 0;
    std::size_t p = 0;
    std::vector<double> values;  // values[j * n + i]

    std::span<const double> col(std::size_t j) const { return {values.data() + j * n, n}; }
    std::span<double> col(std::size_t j) { return {values.data() + j * n, n}; }
    double at(std::size_t i, std::size_t j) const { return values[j * n + i]; }
};

// Raw covariates of `rows`; with poly_degree > 1 each covariate contributes
// x, x^2, ..., x^degree (grouped by covariate).
ColMatrix gather_design(const Dataset& data, std::span<const std::size_t> rows, int poly_degree = 1);

// Expands one covariate row the same way gather_design does.
void expand_row(std::span<const double> x, int poly_degree, std::vector<double>& out);

}  // namespace drselect::learners

#pragma once

#include <span>
#include <vector>

#include "drselect/learners/design.hpp"

namespace drselect::learners {

enum class LinkKind { identity, logit };

// Coefficients on the original covariate scale.
struct LinearFit {
    double intercept = 0.0;
    std::vector<double> beta;

    double linear_predictor(std::span<const double> x) const;
};

struct LassoOptions {
    double tol = 1e-7;
    int max_sweeps = 1000;
    int max_irls = 50;
};

// L1-penalised least squares (identity) or logistic regression (logit) by
// cyclic coordinate descent on standardised columns; the intercept is not
// penalised. The objective is (1/2n)||y - Xb||^2 + lambda |b|_1 for identity
// and -(1/n) loglik + lambda |b|_1 for logit. Lambdas are visited from largest
// to smallest with warm starts; the result follows the input order.
std::vector<LinearFit> lasso_path(const ColMatrix& X, std::span<const double> y, std::span<const double> lambdas,
                                  LinkKind link, const LassoOptions& options = {});

double soft_threshold(double z, double gamma);

}  // namespace drselect::learners

#pragma once

// Test-only helpers: nuisances backed by plain functions, and a discrete law
// over two binary covariates on which expectations are exact finite sums.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "drselect/core/dataset.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/learners/learner.hpp"

namespace testsupport {

using drselect::learners::FittedNuisance;
using drselect::learners::Role;

class FunctionModel final : public drselect::learners::Model {
public:
    explicit FunctionModel(std::function<double(std::span<const double>)> f) : f_(std::move(f)) {}
    double predict(std::span<const double> x) const override { return f_(x); }

private:
    std::function<double(std::span<const double>)> f_;
};

inline FittedNuisance nuisance(Role role, std::function<double(std::span<const double>)> f,
                               std::optional<int> arm = std::nullopt) {
    FittedNuisance n;
    n.kind = role;
    n.arm = arm;
    n.model = std::make_shared<FunctionModel>(std::move(f));
    n.provenance.learner = "function";
    return n;
}

inline FittedNuisance constant_nuisance(Role role, double v, std::optional<int> arm = std::nullopt) {
    return nuisance(role, [v](std::span<const double>) { return v; }, arm);
}

// Two binary covariates -> four cells; A | X ~ Bernoulli(pi(x)); Y | A, X
// takes the values y_lo or y_hi.
struct ToyLaw {
    std::array<double, 4> px{};       // P(X = cell)
    std::array<double, 4> pi{};       // P(A = 1 | X)
    std::array<double, 8> p_hi{};     // P(Y = y_hi | A, X), index a * 4 + cell
    std::array<double, 2> y_levels{}; // y_lo, y_hi

    static ToyLaw random(std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(0.15, 0.85);
        ToyLaw law;
        double total = 0.0;
        for (double& v : law.px) total += (v = u(rng));
        for (double& v : law.px) v /= total;
        for (double& v : law.pi) v = u(rng);
        for (double& v : law.p_hi) v = u(rng);
        law.y_levels = {u(rng) - 1.0, 1.0 + 2.0 * u(rng)};
        return law;
    }

    static std::array<double, 2> covariates(int cell) {
        return {static_cast<double>(cell & 1), static_cast<double>((cell >> 1) & 1)};
    }
    static int cell_of(std::span<const double> x) {
        return static_cast<int>(x[0] > 0.5) + 2 * static_cast<int>(x[1] > 0.5);
    }

    // E[Y | A = a, X = cell]
    double mean_y(int a, int cell) const {
        const double ph = p_hi[static_cast<std::size_t>(a * 4 + cell)];
        return ph * y_levels[1] + (1.0 - ph) * y_levels[0];
    }
    // E[Y | X = cell]
    double mean_y(int cell) const { return pi[cell] * mean_y(1, cell) + (1.0 - pi[cell]) * mean_y(0, cell); }

    // Exact E[g(O)] by enumerating every (x, a, y).
    double expect(const std::function<double(std::span<const double>, int, double)>& g) const {
        double total = 0.0;
        for (int cell = 0; cell < 4; ++cell) {
            const auto x = covariates(cell);
            for (int a = 0; a < 2; ++a) {
                const double pa = a == 1 ? pi[cell] : 1.0 - pi[cell];
                const double ph = p_hi[static_cast<std::size_t>(a * 4 + cell)];
                total += px[cell] * pa * ph * g(x, a, y_levels[1]);
                total += px[cell] * pa * (1.0 - ph) * g(x, a, y_levels[0]);
            }
        }
        return total;
    }

    double expect_x(const std::function<double(int)>& g) const {
        double total = 0.0;
        for (int cell = 0; cell < 4; ++cell) total += px[cell] * g(cell);
        return total;
    }
};

// Random cell-wise function with values in [lo, hi].
inline std::function<double(std::span<const double>)> random_cell_function(std::mt19937_64& rng, double lo,
                                                                          double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::array<double, 4> v{u(rng), u(rng), u(rng), u(rng)};
    return [v](std::span<const double> x) { return v[static_cast<std::size_t>(ToyLaw::cell_of(x))]; };
}

inline double exact_mean_h(const ToyLaw& law, const drselect::functionals::FunctionalDef& def,
                           const FittedNuisance& p, const drselect::functionals::OutcomeFit& b) {
    return law.expect([&](std::span<const double> x, int a, double y) {
        return drselect::functionals::h_transform(def, p, b, {x, a, y});
    });
}

}  // namespace testsupport

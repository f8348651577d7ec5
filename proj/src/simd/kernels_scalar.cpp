#include "drselect/simd/kernels.hpp"

#include <limits>

namespace drselect::simd {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double bilinear_sum_scalar(const double* b, const double* p, const double* h1, const double* h2,
                           const double* h3, const double* h4, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += b[i] * p[i] * h1[i] + b[i] * h2[i] + p[i] * h3[i] + h4[i];
    }
    return s;
}

double max_scalar(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > m) m = x[i];
    }
    return m;
}

double sum_sq_dev_scalar(const double* x, double center, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - center;
        s += d * d;
    }
    return s;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

constexpr KernelTable kScalar{
    Isa::scalar,       "scalar",      sum_scalar,         dot_scalar,        dot3_scalar,
    axpy_scalar,       bilinear_sum_scalar, max_scalar,    sum_sq_dev_scalar, sum_sq_diff_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace drselect::simd

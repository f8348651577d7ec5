#pragma once

// Data-parallel inner loops used across the library. Every kernel has a
// scalar reference implementation; an AVX2/FMA variant is selected at runtime
// when the CPU supports it. The variants agree to rounding (see
// tests/unit/test_simd.cpp), not bit-for-bit, because lane-wise reductions
// reassociate the sums.

#include <cstddef>
#include <span>
#include <string_view>

namespace drselect::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    const char* name;
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i a_i * b_i * c_i
    double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // sum_i b_i p_i h1_i + b_i h2_i + p_i h3_i + h4_i
    double (*bilinear_sum)(const double* b, const double* p, const double* h1, const double* h2,
                           const double* h3, const double* h4, std::size_t n);
    double (*max)(const double* x, std::size_t n);
    // sum_i (x_i - center)^2
    double (*sum_sq_dev)(const double* x, double center, std::size_t n);
    // sum_i (a_i - b_i)^2
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

// Table used by the library. Chosen once: DRSELECT_SIMD=scalar|avx2 in the
// environment overrides CPU detection.
const KernelTable& active();

// Test hook; affects subsequent calls to active() in this process.
void force_isa(Isa isa);

std::string_view active_name();

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
    return active().dot3(a.data(), b.data(), c.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}
inline double max(std::span<const double> x) { return active().max(x.data(), x.size()); }
inline double sum_sq_dev(std::span<const double> x, double center) {
    return active().sum_sq_dev(x.data(), center, x.size());
}
inline double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    return active().sum_sq_diff(a.data(), b.data(), a.size());
}

}  // namespace drselect::simd

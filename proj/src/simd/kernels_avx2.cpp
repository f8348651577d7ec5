// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// CPU feature check.
#include <immintrin.h>

#include <limits>

#include "drselect/simd/kernels.hpp"

namespace drselect::simd {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double bilinear_sum_avx2(const double* b, const double* p, const double* h1, const double* h2,
                         const double* h3, const double* h4, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d vp = _mm256_loadu_pd(p + i);
        // b * (p * h1 + h2) + p * h3 + h4
        __m256d t = _mm256_fmadd_pd(vp, _mm256_loadu_pd(h1 + i), _mm256_loadu_pd(h2 + i));
        __m256d u = _mm256_fmadd_pd(vp, _mm256_loadu_pd(h3 + i), _mm256_loadu_pd(h4 + i));
        acc = _mm256_add_pd(acc, _mm256_fmadd_pd(vb, t, u));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += b[i] * p[i] * h1[i] + b[i] * h2[i] + p[i] * h3[i] + h4[i];
    return s;
}

double max_avx2(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vm = _mm256_set1_pd(m);
        for (; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, vm);
        for (double v : lanes) {
            if (v > m) m = v;
        }
    }
    for (; i < n; ++i) {
        if (x[i] > m) m = x[i];
    }
    return m;
}

double sum_sq_dev_avx2(const double* x, double center, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - center;
        s += d * d;
    }
    return s;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

constexpr KernelTable kAvx2{
    Isa::avx2,  "avx2",           sum_avx2, dot_avx2,        dot3_avx2,
    axpy_avx2,  bilinear_sum_avx2, max_avx2, sum_sq_dev_avx2, sum_sq_diff_avx2,
};

}  // namespace

const KernelTable* avx2_kernels_compiled() { return &kAvx2; }

}  // namespace drselect::simd

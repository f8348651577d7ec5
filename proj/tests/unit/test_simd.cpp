#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "drselect/simd/kernels.hpp"

using namespace drselect::simd;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z(0.0, 3.0);
    std::vector<double> v(n);
    for (double& x : v) x = z(rng);
    return v;
}

void check_close(double a, double b, double scale) {
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, scale));
}

}  // namespace

TEST_CASE("simd: avx2 kernels agree with the scalar reference") {
    const KernelTable* fast = avx2_kernels();
    if (fast == nullptr) {
        MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
        return;
    }
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(11);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 100u, 1001u}) {
        CAPTURE(n);
        const auto a = random_vector(rng, n);
        const auto b = random_vector(rng, n);
        const auto c = random_vector(rng, n);
        const auto d = random_vector(rng, n);
        const auto e = random_vector(rng, n);
        const auto f = random_vector(rng, n);
        double scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i]) * (1.0 + std::abs(b[i])) * (1.0 + std::abs(c[i]));

        check_close(ref.sum(a.data(), n), fast->sum(a.data(), n), scale);
        check_close(ref.dot(a.data(), b.data(), n), fast->dot(a.data(), b.data(), n), scale);
        check_close(ref.dot3(a.data(), b.data(), c.data(), n), fast->dot3(a.data(), b.data(), c.data(), n), scale);
        check_close(ref.bilinear_sum(a.data(), b.data(), c.data(), d.data(), e.data(), f.data(), n),
                    fast->bilinear_sum(a.data(), b.data(), c.data(), d.data(), e.data(), f.data(), n), scale * 10);
        check_close(ref.sum_sq_dev(a.data(), 0.7, n), fast->sum_sq_dev(a.data(), 0.7, n), scale * 10);
        check_close(ref.sum_sq_diff(a.data(), b.data(), n), fast->sum_sq_diff(a.data(), b.data(), n), scale * 10);
        if (n > 0) CHECK(ref.max(a.data(), n) == fast->max(a.data(), n));

        auto y1 = b;
        auto y2 = b;
        ref.axpy(1.5, a.data(), y1.data(), n);
        fast->axpy(1.5, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], std::abs(y1[i]));
    }
}

TEST_CASE("simd: scalar kernels match naive loops") {
    const KernelTable& ref = scalar_kernels();
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 0, -1, 1, 0.5};
    CHECK(ref.sum(a.data(), 5) == doctest::Approx(15));
    CHECK(ref.dot(a.data(), b.data(), 5) == doctest::Approx(2 - 3 + 4 + 2.5));
    CHECK(ref.max(b.data(), 5) == 2);
    CHECK(ref.sum_sq_dev(a.data(), 3.0, 5) == doctest::Approx(10));
    CHECK(ref.sum_sq_diff(a.data(), a.data(), 5) == 0);
    // b p h1 + b h2 + p h3 + h4 with every array = a: a^3 + 2 a^2 + a
    CHECK(ref.bilinear_sum(a.data(), a.data(), a.data(), a.data(), a.data(), a.data(), 5) ==
          doctest::Approx(225 + 2 * 55 + 15));
}

TEST_CASE("simd: forced isa is honoured") {
    const Isa before = active().isa;
    force_isa(Isa::scalar);
    CHECK(active().isa == Isa::scalar);
    CHECK(active_name() == std::string_view("scalar"));
    force_isa(before);
}

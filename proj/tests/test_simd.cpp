#include <catch_amalgamated.hpp>

#include "pnavg/error.hpp"
#include "pnavg/simd/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace pnavg;
namespace sd = pnavg::simd;

namespace {

std::vector<double> random_reals(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (auto& x : v)
        x = g(rng);
    return v;
}

std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed) {
    auto re = random_reals(n, seed);
    auto im = random_reals(n, seed + 1);
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = {re[i], im[i]};
    return v;
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("scalar backend is always available") {
    CHECK(sd::backend_available(sd::Backend::scalar));
    CHECK(sd::scalar_kernels().backend == sd::Backend::scalar);
    CHECK(sd::backend_name(sd::Backend::scalar) == "scalar");
    CHECK(sd::backend_name(sd::Backend::avx2) == "avx2");
}

TEST_CASE("select_backend switches and rejects unavailable choices") {
    const auto before = sd::active_backend();
    sd::select_backend(sd::Backend::scalar);
    CHECK(sd::active_backend() == sd::Backend::scalar);
    if (sd::backend_available(sd::Backend::avx2)) {
        sd::select_backend(sd::Backend::avx2);
        CHECK(sd::active_backend() == sd::Backend::avx2);
    } else {
        CHECK_THROWS_AS(sd::select_backend(sd::Backend::avx2), ParameterError);
    }
    sd::select_backend(before);
}

TEST_CASE("vector kernels match the scalar reference") {
    const sd::KernelTable* vec = sd::avx2_kernels();
    if (vec == nullptr || !sd::backend_available(sd::Backend::avx2))
        SKIP("avx2 kernels not available on this machine");
    const sd::KernelTable& ref = sd::scalar_kernels();

    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 63u, 64u, 100u, 1023u, 4097u}) {
        for (std::size_t off : {0u, 1u, 3u}) {
            CAPTURE(n, off);
            const auto a = random_reals(n + off, 10 * n + off);
            const auto b = random_reals(n + off, 10 * n + off + 5);
            const auto x = random_complex(n + off, 7 * n + off);
            const double* pa = a.data() + off;
            const double* pb = b.data() + off;
            const cplx* px = x.data() + off;

            std::vector<double> r1(n), r2(n);
            ref.multiply(pa, pb, r1.data(), n);
            vec->multiply(pa, pb, r2.data(), n);
            CHECK(r1 == r2);

            std::vector<double> acc1(pa, pa + n), acc2(pa, pa + n);
            ref.add_inplace(acc1.data(), pb, n);
            vec->add_inplace(acc2.data(), pb, n);
            CHECK(acc1 == acc2);

            ref.divide_inplace(acc1.data(), 3.7, n);
            vec->divide_inplace(acc2.data(), 3.7, n);
            CHECK(acc1 == acc2);

            std::vector<cplx> w1(n), w2(n);
            ref.window_complex(px, pa, w1.data(), n);
            vec->window_complex(px, pa, w2.data(), n);
            CHECK(w1 == w2);

            std::vector<double> n1(pb, pb + n), n2(pb, pb + n);
            ref.accumulate_norm(n1.data(), px, n);
            vec->accumulate_norm(n2.data(), px, n);
            CHECK(n1 == n2);

            CHECK(close(ref.dot(pa, pb, n), vec->dot(pa, pb, n), 1e-12));
            const auto m1 = ref.moments(pa, n);
            const auto m2 = vec->moments(pa, n);
            CHECK(close(m1.sum, m2.sum, 1e-12));
            CHECK(close(m1.sum_sq, m2.sum_sq, 1e-12));
            for (std::size_t lag : {std::size_t{0}, std::size_t{1}, n / 2, n}) {
                if (lag >= n)
                    continue;
                const cplx c1 = ref.lag_correlation(px, n, lag);
                const cplx c2 = vec->lag_correlation(px, n, lag);
                CHECK(close(c1.real(), c2.real(), 1e-12));
                CHECK(close(c1.imag(), c2.imag(), 1e-12));
            }
        }
    }
}

TEST_CASE("scalar kernels compute their definitions") {
    const auto& k = sd::scalar_kernels();
    const std::vector<cplx> x{{1, 2}, {3, -1}, {0, 1}};
    // lag 1: x0 conj(x1) + x1 conj(x2)
    const cplx expect = x[0] * std::conj(x[1]) + x[1] * std::conj(x[2]);
    CHECK(k.lag_correlation(x.data(), 3, 1) == expect);
    const std::vector<double> a{1, 2, 3};
    const auto m = k.moments(a.data(), 3);
    CHECK(m.sum == 6.0);
    CHECK(m.sum_sq == 14.0);
}

TEST_CASE("span wrappers check their lengths") {
    std::vector<double> a(4, 1.0), b(3, 1.0), out(4);
    CHECK_THROWS_AS(sd::multiply(a, b, out), ShapeError);
    CHECK_THROWS_AS(sd::add_inplace(a, b), ShapeError);
    CHECK_THROWS_AS(sd::dot(a, b), ShapeError);
    std::vector<cplx> x(3);
    CHECK_THROWS_AS(sd::lag_correlation(x, 3), RangeError);
}

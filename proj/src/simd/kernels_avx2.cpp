// Compiled with -mavx2 -mfma -ffp-contract=off. Only reached after the
// dispatcher has confirmed CPU support.

#include "pnavg/simd/kernels.hpp"

#include <immintrin.h>

namespace pnavg::simd {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void multiply_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    for (; k < n; ++k)
        out[k] = a[k] * b[k];
}

void add_inplace_avx2(double* acc, const double* x, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), _mm256_loadu_pd(x + k)));
    for (; k < n; ++k)
        acc[k] += x[k];
}

void divide_inplace_avx2(double* x, double d, std::size_t n) {
    const __m256d vd = _mm256_set1_pd(d);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(x + k, _mm256_div_pd(_mm256_loadu_pd(x + k), vd));
    for (; k < n; ++k)
        x[k] /= d;
}

void window_complex_avx2(const cplx* x, const double* w, cplx* out, std::size_t n) {
    const double* xs = reinterpret_cast<const double*>(x);
    double* os = reinterpret_cast<double*>(out);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + k)), 0x50);
        _mm256_storeu_pd(os + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(xs + 2 * k), ww));
    }
    for (; k < n; ++k)
        out[k] = cplx(x[k].real() * w[k], x[k].imag() * w[k]);
}

void accumulate_norm_avx2(double* acc, const cplx* x, std::size_t n) {
    const double* xs = reinterpret_cast<const double*>(x);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d v0 = _mm256_loadu_pd(xs + 2 * k);
        const __m256d v1 = _mm256_loadu_pd(xs + 2 * k + 4);
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        const __m256d norms = _mm256_permute4x64_pd(h, 0xD8);
        _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), norms));
    }
    for (; k < n; ++k) {
        const double re = x[k].real();
        const double im = x[k].imag();
        acc[k] += re * re + im * im;
    }
}

cplx lag_correlation_avx2(const cplx* x, std::size_t n, std::size_t lag) {
    if (lag >= n)
        return {0.0, 0.0};
    const std::size_t m = n - lag;
    const double* xs = reinterpret_cast<const double*>(x);
    const double* ys = reinterpret_cast<const double*>(x + lag);
    // Lanes hold (re, im) pairs of two consecutive samples.
    __m256d prod0 = _mm256_setzero_pd(), prod1 = _mm256_setzero_pd();
    __m256d swap0 = _mm256_setzero_pd(), swap1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        const __m256d a0 = _mm256_loadu_pd(xs + 2 * k);
        const __m256d a1 = _mm256_loadu_pd(xs + 2 * k + 4);
        const __m256d b0 = _mm256_loadu_pd(ys + 2 * k);
        const __m256d b1 = _mm256_loadu_pd(ys + 2 * k + 4);
        prod0 = _mm256_fmadd_pd(a0, b0, prod0);
        prod1 = _mm256_fmadd_pd(a1, b1, prod1);
        swap0 = _mm256_fmadd_pd(a0, _mm256_permute_pd(b0, 0x5), swap0);
        swap1 = _mm256_fmadd_pd(a1, _mm256_permute_pd(b1, 0x5), swap1);
    }
    const __m256d prod = _mm256_add_pd(prod0, prod1);
    const __m256d swap = _mm256_add_pd(swap0, swap1);
    alignas(32) double s[4];
    _mm256_store_pd(s, swap);
    double re = hsum(prod);
    double im = (s[1] + s[3]) - (s[0] + s[2]);
    for (; k < m; ++k) {
        const double a = x[k].real(), b = x[k].imag();
        const double c = x[k + lag].real(), d = x[k + lag].imag();
        re += a * c + b * d;
        im += b * c - a * d;
    }
    return {re, im};
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), s1);
    }
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; k < n; ++k)
        s += a[k] * b[k];
    return s;
}

Moments moments_avx2(const double* x, std::size_t n) {
    __m256d s = _mm256_setzero_pd(), q = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d v = _mm256_loadu_pd(x + k);
        s = _mm256_add_pd(s, v);
        q = _mm256_fmadd_pd(v, v, q);
    }
    Moments m{hsum(s), hsum(q)};
    for (; k < n; ++k) {
        m.sum += x[k];
        m.sum_sq += x[k] * x[k];
    }
    return m;
}

} // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{
        Backend::avx2,     multiply_avx2,        add_inplace_avx2,     divide_inplace_avx2,
        window_complex_avx2, accumulate_norm_avx2, lag_correlation_avx2, dot_avx2,
        moments_avx2,
    };
    return &table;
}

} // namespace pnavg::simd

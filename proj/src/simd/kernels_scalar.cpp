#include "pnavg/simd/kernels.hpp"

namespace pnavg::simd {
namespace {

void multiply_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k)
        out[k] = a[k] * b[k];
}

void add_inplace_scalar(double* acc, const double* x, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k)
        acc[k] += x[k];
}

void divide_inplace_scalar(double* x, double d, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k)
        x[k] /= d;
}

void window_complex_scalar(const cplx* x, const double* w, cplx* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k)
        out[k] = cplx(x[k].real() * w[k], x[k].imag() * w[k]);
}

void accumulate_norm_scalar(double* acc, const cplx* x, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double re = x[k].real();
        const double im = x[k].imag();
        acc[k] += re * re + im * im;
    }
}

cplx lag_correlation_scalar(const cplx* x, std::size_t n, std::size_t lag) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k + lag < n; ++k) {
        const double a = x[k].real(), b = x[k].imag();
        const double c = x[k + lag].real(), d = x[k + lag].imag();
        re += a * c + b * d;
        im += b * c - a * d;
    }
    return {re, im};
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        s += a[k] * b[k];
    return s;
}

Moments moments_scalar(const double* x, std::size_t n) {
    Moments m;
    for (std::size_t k = 0; k < n; ++k) {
        m.sum += x[k];
        m.sum_sq += x[k] * x[k];
    }
    return m;
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        Backend::scalar,     multiply_scalar,        add_inplace_scalar,     divide_inplace_scalar,
        window_complex_scalar, accumulate_norm_scalar, lag_correlation_scalar, dot_scalar,
        moments_scalar,
    };
    return table;
}

} // namespace pnavg::simd

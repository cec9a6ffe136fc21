#pragma once

// Inner-loop kernels with a portable scalar reference and vector variants
// picked at runtime. Elementwise kernels are bit-identical across backends;
// reductions agree to rounding (different summation order).

#include "pnavg/types.hpp"

#include <cstddef>
#include <span>
#include <string_view>

namespace pnavg::simd {

enum class Backend { scalar, avx2 };

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

struct KernelTable {
    Backend backend;
    // out[k] = a[k] * b[k]
    void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
    // acc[k] += x[k]
    void (*add_inplace)(double* acc, const double* x, std::size_t n);
    // x[k] /= d
    void (*divide_inplace)(double* x, double d, std::size_t n);
    // out[k] = x[k] * w[k] (complex times real)
    void (*window_complex)(const cplx* x, const double* w, cplx* out, std::size_t n);
    // acc[k] += |x[k]|^2
    void (*accumulate_norm)(double* acc, const cplx* x, std::size_t n);
    // sum_{k < n - lag} x[k] * conj(x[k + lag])
    cplx (*lag_correlation)(const cplx* x, std::size_t n, std::size_t lag);
    double (*dot)(const double* a, const double* b, std::size_t n);
    Moments (*moments)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the binary was built without the vector variant.
const KernelTable* avx2_kernels();

bool backend_available(Backend b);
Backend active_backend();
// Overrides the runtime choice. Throws ParameterError if b is unavailable.
void select_backend(Backend b);
const KernelTable& active();

std::string_view backend_name(Backend b);

// Convenience wrappers over the active backend.
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
void add_inplace(std::span<double> acc, std::span<const double> x);
void divide_inplace(std::span<double> x, double d);
void window_complex(std::span<const cplx> x, std::span<const double> w, std::span<cplx> out);
void accumulate_norm(std::span<double> acc, std::span<const cplx> x);
cplx lag_correlation(std::span<const cplx> x, std::size_t lag);
double dot(std::span<const double> a, std::span<const double> b);
Moments moments(std::span<const double> x);

} // namespace pnavg::simd

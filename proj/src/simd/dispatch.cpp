#include "pnavg/error.hpp"
#include "pnavg/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace pnavg::simd {

#if !defined(PNAVG_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(PNAVG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* detect() {
    // PNAVG_SIMD=scalar forces the reference kernels.
    if (const char* env = std::getenv("PNAVG_SIMD")) {
        if (std::string(env) == "scalar")
            return &scalar_kernels();
    }
    if (cpu_has_avx2() && avx2_kernels() != nullptr)
        return avx2_kernels();
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{detect()};
    return table;
}

} // namespace

bool backend_available(Backend b) {
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
        return cpu_has_avx2() && avx2_kernels() != nullptr;
    }
    return false;
}

Backend active_backend() { return active().backend; }

void select_backend(Backend b) {
    if (!backend_available(b))
        throw ParameterError("SIMD backend '" + std::string(backend_name(b)) + "' is not available");
    current().store(b == Backend::avx2 ? avx2_kernels() : &scalar_kernels());
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend b) {
    switch (b) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    }
    return "unknown";
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    if (a.size() != b.size() || a.size() != out.size())
        throw ShapeError("multiply: operand lengths differ");
    active().multiply(a.data(), b.data(), out.data(), a.size());
}

void add_inplace(std::span<double> acc, std::span<const double> x) {
    if (acc.size() != x.size())
        throw ShapeError("add_inplace: operand lengths differ");
    active().add_inplace(acc.data(), x.data(), x.size());
}

void divide_inplace(std::span<double> x, double d) { active().divide_inplace(x.data(), d, x.size()); }

void window_complex(std::span<const cplx> x, std::span<const double> w, std::span<cplx> out) {
    if (x.size() != w.size() || x.size() != out.size())
        throw ShapeError("window_complex: operand lengths differ");
    active().window_complex(x.data(), w.data(), out.data(), x.size());
}

void accumulate_norm(std::span<double> acc, std::span<const cplx> x) {
    if (acc.size() != x.size())
        throw ShapeError("accumulate_norm: operand lengths differ");
    active().accumulate_norm(acc.data(), x.data(), x.size());
}

cplx lag_correlation(std::span<const cplx> x, std::size_t lag) {
    if (lag >= x.size())
        throw RangeError("lag_correlation: lag beyond sequence length");
    return active().lag_correlation(x.data(), x.size(), lag);
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ShapeError("dot: operand lengths differ");
    return active().dot(a.data(), b.data(), a.size());
}

Moments moments(std::span<const double> x) { return active().moments(x.data(), x.size()); }

} // namespace pnavg::simd

#pragma once

#include "pnavg/types.hpp"

#include <span>

namespace pnavg::fft {

// In-place complex DFT, X[m] = sum_k x[k] e^{-2πj km/n}. Plans are created
// once per size with FFTW_ESTIMATE so the arithmetic is reproducible.
void forward(std::span<cplx> data);
// Unnormalized inverse (sign +1); divide by n to invert forward().
void inverse(std::span<cplx> data);

// Bin frequency in Hz for index m of an n-point transform at rate fs,
// mapped to [-fs/2, fs/2).
double bin_frequency(std::size_t m, std::size_t n, double fs) noexcept;

} // namespace pnavg::fft

#pragma once

#include "pnavg/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pnavg {

// Wiener phase path with exact Gaussian increments of variance 2πβ·dt.
// samples[0] == theta0; beta == 0 gives a constant path.
PhasePath wiener_path(double beta, double theta0, double dt, std::size_t n, SeedId seed);

// count independent paths with seeds {master, first_index + i}.
std::vector<PhasePath> wiener_ensemble(double beta, double theta0, double dt, std::size_t n,
                                       std::uint64_t master, std::size_t count,
                                       std::uint64_t first_index = 0, unsigned threads = 0);

double sample_offset(const OffsetDistribution& dist, SeedId seed);

// Phase of the carrier ramp 2π·f·k/fs reduced to [0, 2π). Every module that
// rebuilds a nominal ramp uses this so they agree to the last bit.
double carrier_phase(double f, double fs, std::size_t k) noexcept;

// samples[k] = cos(2π(f_c + f_i)k/fs + θ_k).
// Requires fs >= 8(f_c + |f_i|) and phase.dt == 1/fs.
Waveform oscillator_waveform(const OscillatorSpec& spec, double f_i, const PhasePath& phase, double fs,
                             std::size_t n);

// u_k = exp(jθ_k)
std::vector<cplx> phase_shift(std::span<const double> theta);

struct MonteCarloValue {
    cplx value;
    double std_error = 0.0; // of the real part, from across-path spread
};

// Ensemble-and-time average of u_t conj(u_{t+τ}). tau must be a multiple of dt.
cplx phase_shift_autocorr_mc(std::span<const PhasePath> paths, double tau);
MonteCarloValue phase_shift_autocorr_mc_detailed(std::span<const PhasePath> paths, double tau);

// Converts a lag in seconds to samples; throws RangeError unless it is a
// non-negative multiple of dt below max_samples.
std::size_t lag_in_samples(double tau, double dt, std::size_t max_samples);

} // namespace pnavg

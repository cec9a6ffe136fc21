#pragma once

#include "pnavg/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pnavg {

enum class FilterKind { lowpass, highpass };
enum class FilterMode { brickwall, fir };

struct FilterOptions {
    FilterMode mode = FilterMode::brickwall;
    // Brick-wall only: Planck taper applied to this many samples at
    // each end before the transform, so the circular wrap does not ring into
    // the interior. The tapered region is part of the transient.
    std::size_t edge_taper = 0;
    // FIR only: transition width in Hz (0 picks min(f_cut, fs/2 - f_cut)) and
    // stopband attenuation of the Kaiser window.
    double transition_hz = 0.0;
    double stopband_db = 90.0;
};

// Zero-phase filtering. Brick-wall: lowpass keeps |f| <= f_cut, highpass keeps
// |f| > f_cut, so the two are exact complements. FIR: linear-phase
// Kaiser-windowed sinc with its group delay removed.
Waveform ideal_filter(const Waveform& w, FilterKind kind, double f_cut, const FilterOptions& options = {});

// Brick-wall lowpass of a complex sequence, |f| <= f_cut.
std::vector<cplx> brickwall_lowpass(std::span<const cplx> x, double fs, double f_cut, std::size_t edge_taper = 0);

// Odd-length linear-phase lowpass taps (unit DC gain).
std::vector<double> design_kaiser_lowpass(double f_cut, double transition_hz, double stopband_db, double fs);

// Samples at each end that do not satisfy the steady-state filter response.
std::size_t filter_transient(const FilterOptions& options, double fs, double f_cut);

} // namespace pnavg

#pragma once

// Measurement device used by tests and the circuit simulator: recovers the
// instantaneous phase of a real narrowband signal around a known nominal
// frequency by complex downconversion and a brick-wall lowpass.

#include "pnavg/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pnavg {

struct DemodOptions {
    // Lowpass cutoff after downconversion; 0 selects the nominal frequency,
    // which sits halfway between the wanted term and its image at -2f.
    double bandwidth = 0.0;
    std::size_t edge_taper = 0;
};

struct Demodulated {
    double fs = 1.0;
    double nominal_frequency = 0.0;
    // Phase residual relative to the ramp 2π f k / fs, unwrapped outward
    // from the middle sample (which is left in (-π, π]).
    std::vector<double> phase;
    // Envelope of the input term, i.e. A for A cos(2π f t + φ).
    std::vector<double> amplitude;
};

Demodulated demodulate(const Waveform& w, double nominal_frequency, const DemodOptions& options = {});

// Unwraps in place, starting at `anchor` and walking to both ends.
void unwrap_from(std::span<double> phase, std::size_t anchor);

// RMS of (estimate - reference) over [trim, n - trim) after removing the
// constant multiple of `ambiguity` nearest to the mean difference. Pass 2π
// for ordinary phase, π for the output of a 2-divider.
double phase_rms_error(std::span<const double> estimate, std::span<const double> reference, std::size_t trim,
                       double ambiguity);

} // namespace pnavg

#pragma once

// Welch PSD and ensemble autocorrelation estimators. Densities use the same
// two-sided convention as analytic.hpp: a unit-variance white sequence
// sampled at fs has flat density 1/fs, and the density integrates to the
// mean power.

#include "pnavg/types.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pnavg {

enum class Window { hann, rect };
enum class Sidedness { one, two };

struct WelchOptions {
    std::size_t segment_len = 16384;
    double overlap = 0.5;
    Window window = Window::hann;
};

struct SpectrumEstimate {
    // Ascending. Two-sided: [-fs/2, fs/2). One-sided: [0, fs/2].
    std::vector<double> freqs;
    std::vector<double> psd;
    std::size_t n_segments = 0;
    double fs = 1.0;
    Sidedness sidedness = Sidedness::two;

    double bin_width() const noexcept;
    std::vector<double> dbc_hz() const;
};

std::vector<double> make_window(Window w, std::size_t n);

// Complex baseband input: two-sided estimate.
SpectrumEstimate welch_psd(std::span<const cplx> x, double fs, const WelchOptions& options = {});
// Real input: one-sided estimate (interior bins doubled).
SpectrumEstimate welch_psd(const Waveform& w, const WelchOptions& options = {});

// Trapezoid integral of psd over its grid.
double integrated_power(const SpectrumEstimate& s);

// Mean of per-member estimates plus the standard error of that mean.
struct EnsembleSpectrum {
    SpectrumEstimate mean;
    std::vector<double> std_error;
    std::size_t members = 0;
};

// Member i is produced by make(i). Members are generated and estimated in
// parallel but summed in index order, so the result does not depend on the
// thread count.
using SequenceSource = std::function<std::vector<cplx>(std::size_t)>;
EnsembleSpectrum ensemble_psd(std::size_t members, const SequenceSource& make, double fs,
                              const WelchOptions& options = {}, unsigned threads = 0);

// Welch estimate of exp(jθ) per path, averaged across the ensemble. The
// frequency axis is the offset from the carrier.
EnsembleSpectrum psd_of_phase_shift(std::span<const PhasePath> paths, const WelchOptions& options = {},
                                    unsigned threads = 0);

struct AutocorrEstimate {
    double dt = 1.0;
    std::vector<cplx> values;      // index = lag in samples
    std::vector<double> std_error; // of the real part
};

// Ensemble average of sum_k x_k conj(x_{k+τ}) divided by N (biased, the
// default) or by N - τ (unbiased).
AutocorrEstimate autocorr_estimate(std::span<const std::vector<cplx>> ensemble, std::size_t max_lag, double dt = 1.0,
                                   bool unbiased = false);
AutocorrEstimate autocorr_estimate(std::size_t members, const SequenceSource& make, std::size_t max_lag,
                                   double dt = 1.0, bool unbiased = false, unsigned threads = 0);

} // namespace pnavg

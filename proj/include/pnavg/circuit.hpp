#pragma once

// Averaging circuits in two modes:
//  * symbolic: steady-state phase arithmetic applied directly to phase paths;
//  * waveform: sampled mixers and filters, with each regenerative divider
//    replaced by its steady-state fixed point and checked by substitution.

#include "pnavg/filter.hpp"
#include "pnavg/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pnavg {

// Pointwise product of two waveforms with equal rate and length.
Waveform mix(const Waveform& a, const Waveform& b);

struct SteadyStateResult {
    double omega_prime = 0.0; // rad/s
    PhasePath phase_path_prime;
    double amplitude = 0.5;
};

// Output of the averaging circuit at steady state: the mean frequency and
// the sample-wise mean of the phase paths.
SteadyStateResult steady_state_average(std::span<const PhasePath> phases, std::span<const double> omegas);

// Regenerative n-divider at steady state: frequency and phase divided by n.
SteadyStateResult divider_steady_state(double omega_in, const PhasePath& phase_in, std::size_t n);

// Largest per-sample |θ' - (θ - (n-1)θ')| over the path.
double divider_residual(const PhasePath& phase_in, const PhasePath& phase_out, std::size_t n);

// An oscillator plus the stream that realizes its offset and phase path.
struct OscillatorSource {
    OscillatorSpec spec;
    SeedId seed;
};

struct RealizedOscillator {
    double carrier = 0.0; // f_c, Hz
    double offset = 0.0;  // f_i, Hz
    PhasePath phase;      // sampled at 1/fs, `lead` extra samples before t = 0
    std::size_t lead = 0;

    double frequency() const noexcept { return carrier + offset; }
    double omega() const noexcept { return two_pi * (carrier + offset); }
};

RealizedOscillator realize(const OscillatorSource& source, double fs, std::size_t n, std::size_t lead = 0);

struct CircuitOptions {
    FilterMode mode = FilterMode::brickwall;
    // 0 picks the defaults: highpass between the near-DC and 2f_c products
    // (f_c for two inputs, (n-1)f_c for n), divider lowpass at 2f'.
    double highpass_cut = 0.0;
    double lowpass_cut = 0.0;
    // Brick-wall taper length at each end; 0 picks 32 fs / f_c.
    std::size_t edge_guard = 0;
    double fir_stopband_db = 90.0;
};

// Waveform-mode regenerative divider. The input is a narrowband signal of
// nominal frequency f_in; the output A_out cos(ψ/n) is synthesized from the
// measured input phase ψ, then pushed once around the loop (multiplier,
// mixer, lowpass) to confirm it reproduces itself.
struct DividerRun {
    Waveform output;
    std::vector<double> input_phase;  // residual of ψ against 2π f_in t
    std::vector<double> output_phase; // residual of ψ' against 2π f_in t / n
    double substitution_residual = 0.0;
    double loop_rms = 0.0; // RMS(loop(y) - y) over the interior
    double loop_gain = 0.0;
};

DividerRun simulate_divider(const Waveform& input, double f_in, std::size_t n, double output_amplitude,
                            const CircuitOptions& options, std::size_t trim);

struct CircuitRun {
    Waveform output;
    double nominal_output_frequency = 0.0; // Hz, output phase residuals are relative to this ramp
    std::vector<RealizedOscillator> inputs;
    SteadyStateResult symbolic;
    // Phase residual the divider settled on (including offset ramps).
    std::vector<double> output_phase;
    // Waveform-level phase of the output measured by the demodulator.
    std::vector<double> demodulated_phase;
    // Symbolic prediction on the same footing as demodulated_phase.
    std::vector<double> predicted_phase;
    // Constant ambiguity of the output phase: π after a 2-divider, 2π/n after n.
    double phase_ambiguity = two_pi;
    double substitution_residual = 0.0;
    double loop_rms = 0.0;
    std::size_t trim = 0;
};

// Two oscillators through mixer, highpass and a 2-divider.
CircuitRun simulate_fig1(const OscillatorSource& osc1, const OscillatorSource& osc2, double fs, double duration,
                         const CircuitOptions& options = {});

// Mixing stage alone: n oscillators multiplied, highpass above (n-1)f_c.
// Output ≈ 2^{1-n} cos(Σψ_i). For n = 4 this is the four-input tree.
CircuitRun simulate_mixing_tree(std::span<const OscillatorSource> oscs, double fs, double duration,
                                const CircuitOptions& options = {});

// Mixing stage followed by an n-divider: the n-oscillator averager.
CircuitRun simulate_n_average(std::span<const OscillatorSource> oscs, double fs, double duration,
                              const CircuitOptions& options = {});

// The oscillator mixed with its own output delayed by `delta` seconds, then
// divided by 2. delta must be a whole number of samples.
CircuitRun simulate_delayed_self_average(const OscillatorSource& osc, double delta, double fs, double duration,
                                         const CircuitOptions& options = {});

// φ_k = (θ_k + θ_{k-D})/2 on a path that carries D lead samples; the result
// has |path| - D samples starting at t = 0.
PhasePath delayed_average_path(const PhasePath& with_lead, std::size_t delay_samples);

// Number of samples in delta, or ParameterError if not an integer count.
std::size_t delay_in_samples(double delta, double fs);

} // namespace pnavg

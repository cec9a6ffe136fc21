#include "pnavg/circuit.hpp"

#include "pnavg/demod.hpp"
#include "pnavg/error.hpp"
#include "pnavg/simd/kernels.hpp"
#include "pnavg/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pnavg {

Waveform mix(const Waveform& a, const Waveform& b) {
    if (a.fs != b.fs)
        throw ShapeError("mix: sample rates differ");
    if (a.size() != b.size())
        throw ShapeError("mix: lengths differ");
    Waveform out;
    out.fs = a.fs;
    out.t0 = a.t0;
    out.samples.resize(a.size());
    simd::multiply(a.samples, b.samples, out.samples);
    return out;
}

SteadyStateResult steady_state_average(std::span<const PhasePath> phases, std::span<const double> omegas) {
    if (phases.size() < 2)
        throw ShapeError("steady_state_average: need at least two inputs");
    if (omegas.size() != phases.size())
        throw ShapeError("steady_state_average: one frequency per phase path is required");
    const auto& first = phases.front();
    for (const auto& p : phases)
        if (p.dt != first.dt || p.size() != first.size())
            throw ShapeError("steady_state_average: phase paths differ in dt or length");

    const auto count = static_cast<double>(phases.size());
    SteadyStateResult r;
    r.phase_path_prime.dt = first.dt;
    r.phase_path_prime.seed = first.seed;
    r.phase_path_prime.samples = first.samples;
    for (std::size_t i = 1; i < phases.size(); ++i)
        simd::add_inplace(r.phase_path_prime.samples, phases[i].samples);
    simd::divide_inplace(r.phase_path_prime.samples, count);
    double omega_sum = 0.0;
    for (double w : omegas)
        omega_sum += w;
    r.omega_prime = omega_sum / count;
    r.amplitude = 0.5;
    return r;
}

SteadyStateResult divider_steady_state(double omega_in, const PhasePath& phase_in, std::size_t n) {
    if (n < 2)
        throw ParameterError("divider_steady_state: division ratio must be at least 2");
    SteadyStateResult r;
    r.omega_prime = omega_in / static_cast<double>(n);
    r.phase_path_prime = phase_in;
    simd::divide_inplace(r.phase_path_prime.samples, static_cast<double>(n));
    r.amplitude = 0.5;
    return r;
}

double divider_residual(const PhasePath& phase_in, const PhasePath& phase_out, std::size_t n) {
    if (phase_in.size() != phase_out.size())
        throw ShapeError("divider_residual: length mismatch");
    const auto m = static_cast<double>(n) - 1.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < phase_in.size(); ++k) {
        const double out = phase_out.samples[k];
        worst = std::max(worst, std::abs(out - (phase_in.samples[k] - m * out)));
    }
    return worst;
}

RealizedOscillator realize(const OscillatorSource& source, double fs, std::size_t n, std::size_t lead) {
    if (!std::isfinite(fs) || fs <= 0.0)
        throw ParameterError("realize: fs must be positive");
    RealizedOscillator r;
    r.carrier = source.spec.carrier();
    r.offset = sample_offset(source.spec.offset(), source.seed);
    r.phase = wiener_path(source.spec.beta(), source.spec.theta0(), 1.0 / fs, n + lead, source.seed);
    r.lead = lead;
    return r;
}

std::size_t delay_in_samples(double delta, double fs) {
    if (!std::isfinite(delta) || delta < 0.0)
        throw ParameterError("delay must be finite and non-negative");
    const double samples = delta * fs;
    const double rounded = std::round(samples);
    if (std::abs(samples - rounded) > 1e-9 * std::max(1.0, rounded))
        throw ParameterError("delay " + std::to_string(delta) + " s is not a whole number of samples at fs=" +
                             std::to_string(fs) + " Hz");
    return static_cast<std::size_t>(rounded);
}

PhasePath delayed_average_path(const PhasePath& with_lead, std::size_t delay_samples) {
    if (delay_samples >= with_lead.size())
        throw ShapeError("delayed_average_path: delay longer than the path");
    const std::size_t n = with_lead.size() - delay_samples;
    PhasePath out;
    out.dt = with_lead.dt;
    out.seed = with_lead.seed;
    out.samples.assign(with_lead.samples.begin() + static_cast<std::ptrdiff_t>(delay_samples),
                       with_lead.samples.end());
    simd::add_inplace(out.samples, std::span<const double>(with_lead.samples).first(n));
    simd::divide_inplace(out.samples, 2.0);
    return out;
}

namespace {

std::size_t guard_samples(const CircuitOptions& options, double fs, double f_c) {
    if (options.edge_guard != 0)
        return options.edge_guard;
    return static_cast<std::size_t>(std::ceil(32.0 * fs / f_c));
}

FilterOptions filter_options(const CircuitOptions& options, std::size_t guard) {
    FilterOptions f;
    f.mode = options.mode;
    f.edge_taper = options.mode == FilterMode::brickwall ? guard : 0;
    f.stopband_db = options.fir_stopband_db;
    return f;
}

std::size_t sample_count(double duration, double fs) {
    if (!std::isfinite(duration) || duration <= 0.0)
        throw ParameterError("duration must be positive");
    return static_cast<std::size_t>(std::llround(duration * fs));
}

double common_carrier(std::span<const OscillatorSource> oscs) {
    const double f_c = oscs.front().spec.carrier();
    for (const auto& o : oscs)
        if (o.spec.carrier() != f_c)
            throw ConfigError("averaging circuits need oscillators with a common nominal frequency");
    return f_c;
}

Waveform waveform_of(const OscillatorSource& src, const RealizedOscillator& r, double fs) {
    return oscillator_waveform(src.spec, r.offset, r.phase, fs, r.phase.size());
}

std::vector<double> offset_ramp(double f_offset, double fs, std::size_t n, double constant = 0.0) {
    std::vector<double> ramp(n);
    for (std::size_t k = 0; k < n; ++k)
        ramp[k] = constant + two_pi * f_offset * static_cast<double>(k) / fs;
    return ramp;
}

// Checks the highpass separates the wanted sum term from every product with
// one sign flipped.
void check_highpass(std::span<const double> freqs, double cut, double fs) {
    double total = 0.0;
    double lowest = freqs.front();
    for (double f : freqs) {
        total += f;
        lowest = std::min(lowest, f);
    }
    const double spurious = total - 2.0 * lowest;
    if (!(cut > std::abs(spurious) && cut < total))
        throw ConfigError("highpass cutoff " + std::to_string(cut) + " Hz must lie between " +
                          std::to_string(std::abs(spurious)) + " and " + std::to_string(total) + " Hz");
    if (cut >= fs / 2.0)
        throw ConfigError("highpass cutoff above Nyquist");
}

void check_rate(double fs, double required) {
    if (fs < required)
        throw SamplingError("sample rate " + std::to_string(fs) + " Hz below required " + std::to_string(required) +
                                " Hz",
                            required);
}

} // namespace

DividerRun simulate_divider(const Waveform& input, double f_in, std::size_t n, double output_amplitude,
                            const CircuitOptions& options, std::size_t trim) {
    if (n < 2)
        throw ParameterError("simulate_divider: division ratio must be at least 2");
    const double fs = input.fs;
    const double f_out = f_in / static_cast<double>(n);
    const double lp_cut = options.lowpass_cut > 0.0 ? options.lowpass_cut : 2.0 * f_out;
    const double next_product = (2.0 * static_cast<double>(n) - 1.0) * f_out;
    if (!(lp_cut > f_out && lp_cut < next_product))
        throw ConfigError("divider lowpass cutoff must lie between " + std::to_string(f_out) + " and " +
                          std::to_string(next_product) + " Hz");
    if (2 * trim >= input.size())
        throw ShapeError("simulate_divider: signal too short for the transient trim");
    const std::size_t guard = guard_samples(options, fs, f_out);

    DividerRun run;
    const Demodulated in = demodulate(input, f_in, {f_in, guard});
    run.input_phase = in.phase;

    // Steady state of the loop: ψ' = ψ - (n-1)ψ'  =>  ψ' = ψ / n.
    run.output_phase = in.phase;
    simd::divide_inplace(run.output_phase, static_cast<double>(n));
    const auto m = static_cast<double>(n - 1);
    for (std::size_t k = 0; k < in.phase.size(); ++k) {
        const double out = run.output_phase[k];
        run.substitution_residual = std::max(run.substitution_residual, std::abs(out - (in.phase[k] - m * out)));
    }

    run.output.fs = fs;
    run.output.t0 = input.t0;
    run.output.samples.resize(input.size());
    for (std::size_t k = 0; k < input.size(); ++k)
        run.output.samples[k] = output_amplitude * std::cos(carrier_phase(f_out, fs, k) + run.output_phase[k]);

    // One trip around the loop: amplifier and (n-1) multiplier feed
    // g cos((n-1)ψ') into the mixer; the lowpass keeps the difference term.
    double input_amplitude = 0.0;
    for (std::size_t k = trim; k < input.size() - trim; ++k)
        input_amplitude += in.amplitude[k];
    input_amplitude /= static_cast<double>(input.size() - 2 * trim);
    const double feedback_amplitude = 2.0 * output_amplitude / input_amplitude;
    run.loop_gain = feedback_amplitude / output_amplitude;

    Waveform feedback;
    feedback.fs = fs;
    feedback.samples.resize(input.size());
    for (std::size_t k = 0; k < input.size(); ++k)
        feedback.samples[k] =
            feedback_amplitude * std::cos(m * (carrier_phase(f_out, fs, k) + run.output_phase[k]));
    const Waveform looped = ideal_filter(mix(input, feedback), FilterKind::lowpass, lp_cut,
                                         filter_options(options, guard));
    double err = 0.0;
    for (std::size_t k = trim; k < input.size() - trim; ++k) {
        const double d = looped.samples[k] - run.output.samples[k];
        err += d * d;
    }
    run.loop_rms = std::sqrt(err / static_cast<double>(input.size() - 2 * trim));
    return run;
}

namespace {

std::size_t circuit_trim(const CircuitOptions& options, double fs, double f_c, double hp_cut) {
    const std::size_t guard = guard_samples(options, fs, f_c);
    std::size_t trim = 2 * guard;
    if (options.mode == FilterMode::fir)
        trim += filter_transient(filter_options(options, guard), fs, hp_cut);
    return trim;
}

// Shared tail of the two-input circuits: highpass, 2-divider, measurement.
void finish_two_input(CircuitRun& run, const Waveform& a, const Waveform& b, double f_c, double fs,
                      double hp_cut, const CircuitOptions& options) {
    const std::size_t guard = guard_samples(options, fs, f_c);
    run.trim = circuit_trim(options, fs, f_c, hp_cut);
    if (4 * run.trim >= a.size())
        throw ConfigError("simulation too short: need more than " + std::to_string(4 * run.trim) + " samples");
    const Waveform high = ideal_filter(mix(a, b), FilterKind::highpass, hp_cut, filter_options(options, guard));
    DividerRun div = simulate_divider(high, 2.0 * f_c, 2, 0.5, options, run.trim);
    run.output = std::move(div.output);
    run.output_phase = std::move(div.output_phase);
    run.substitution_residual = div.substitution_residual;
    run.loop_rms = div.loop_rms;
    run.nominal_output_frequency = f_c;
    run.phase_ambiguity = pi;
    run.demodulated_phase = demodulate(run.output, f_c, {f_c, guard}).phase;
}

} // namespace

CircuitRun simulate_fig1(const OscillatorSource& osc1, const OscillatorSource& osc2, double fs, double duration,
                         const CircuitOptions& options) {
    const OscillatorSource pair[] = {osc1, osc2};
    const double f_c = common_carrier(pair);
    const std::size_t n = sample_count(duration, fs);

    CircuitRun run;
    run.inputs = {realize(osc1, fs, n), realize(osc2, fs, n)};
    const double f1 = run.inputs[0].frequency();
    const double f2 = run.inputs[1].frequency();
    check_rate(fs, 8.0 * (f_c + std::max(std::abs(run.inputs[0].offset), std::abs(run.inputs[1].offset))));
    const double hp_cut = options.highpass_cut > 0.0 ? options.highpass_cut : f_c;
    const double freqs[] = {f1, f2};
    check_highpass(freqs, hp_cut, fs);

    const Waveform s1 = waveform_of(osc1, run.inputs[0], fs);
    const Waveform s2 = waveform_of(osc2, run.inputs[1], fs);

    const PhasePath paths[] = {run.inputs[0].phase, run.inputs[1].phase};
    const double omegas[] = {run.inputs[0].omega(), run.inputs[1].omega()};
    run.symbolic = steady_state_average(paths, omegas);

    finish_two_input(run, s1, s2, f_c, fs, hp_cut, options);

    const double f_offset = (run.inputs[0].offset + run.inputs[1].offset) / 2.0;
    run.predicted_phase = offset_ramp(f_offset, fs, n);
    simd::add_inplace(run.predicted_phase, run.symbolic.phase_path_prime.samples);
    return run;
}

CircuitRun simulate_mixing_tree(std::span<const OscillatorSource> oscs, double fs, double duration,
                                const CircuitOptions& options) {
    if (oscs.size() < 2)
        throw ConfigError("mixing stage needs at least two oscillators");
    const double f_c = common_carrier(oscs);
    const std::size_t n = sample_count(duration, fs);
    const auto count = static_cast<double>(oscs.size());

    CircuitRun run;
    std::vector<double> freqs;
    double required = 0.0;
    for (const auto& o : oscs) {
        run.inputs.push_back(realize(o, fs, n));
        freqs.push_back(run.inputs.back().frequency());
        required += 8.0 * (f_c + std::abs(run.inputs.back().offset));
    }
    check_rate(fs, required);
    const double hp_cut = options.highpass_cut > 0.0 ? options.highpass_cut : (count - 1.0) * f_c;
    check_highpass(freqs, hp_cut, fs);

    const std::size_t guard = guard_samples(options, fs, f_c);
    run.trim = circuit_trim(options, fs, f_c, hp_cut);
    if (4 * run.trim >= n)
        throw ConfigError("simulation too short: need more than " + std::to_string(4 * run.trim) + " samples");

    // Pairwise tree, matching mixing_stage_graph.
    std::vector<Waveform> level;
    for (std::size_t i = 0; i < oscs.size(); ++i)
        level.push_back(waveform_of(oscs[i], run.inputs[i], fs));
    while (level.size() > 1) {
        std::vector<Waveform> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2)
            next.push_back(mix(level[i], level[i + 1]));
        if (level.size() % 2 == 1)
            next.push_back(std::move(level.back()));
        level = std::move(next);
    }
    run.output = ideal_filter(level.front(), FilterKind::highpass, hp_cut, filter_options(options, guard));

    run.symbolic.omega_prime = 0.0;
    run.symbolic.phase_path_prime = run.inputs.front().phase;
    run.symbolic.amplitude = std::ldexp(1.0, 1 - static_cast<int>(oscs.size()));
    double offset_sum = 0.0;
    for (std::size_t i = 0; i < run.inputs.size(); ++i) {
        run.symbolic.omega_prime += run.inputs[i].omega();
        offset_sum += run.inputs[i].offset;
        if (i > 0)
            simd::add_inplace(run.symbolic.phase_path_prime.samples, run.inputs[i].phase.samples);
    }

    run.nominal_output_frequency = count * f_c;
    run.phase_ambiguity = two_pi;
    run.output_phase = {};
    run.demodulated_phase = demodulate(run.output, count * f_c, {count * f_c, guard}).phase;
    run.predicted_phase = offset_ramp(offset_sum, fs, n);
    simd::add_inplace(run.predicted_phase, run.symbolic.phase_path_prime.samples);
    return run;
}

CircuitRun simulate_n_average(std::span<const OscillatorSource> oscs, double fs, double duration,
                              const CircuitOptions& options) {
    CircuitRun run = simulate_mixing_tree(oscs, fs, duration, options);
    const std::size_t count = oscs.size();
    const double f_c = oscs.front().spec.carrier();
    const std::size_t guard = guard_samples(options, fs, f_c);

    DividerRun div = simulate_divider(run.output, static_cast<double>(count) * f_c, count, 0.5, options, run.trim);
    run.output = std::move(div.output);
    run.output_phase = std::move(div.output_phase);
    run.substitution_residual = div.substitution_residual;
    run.loop_rms = div.loop_rms;
    run.nominal_output_frequency = f_c;
    run.phase_ambiguity = two_pi / static_cast<double>(count);

    const PhasePath sum = run.symbolic.phase_path_prime;
    run.symbolic = divider_steady_state(run.symbolic.omega_prime, sum, count);
    run.demodulated_phase = demodulate(run.output, f_c, {f_c, guard}).phase;
    std::vector<double> ramp = run.predicted_phase;
    simd::divide_inplace(ramp, static_cast<double>(count));
    run.predicted_phase = std::move(ramp);
    return run;
}

CircuitRun simulate_delayed_self_average(const OscillatorSource& osc, double delta, double fs, double duration,
                                         const CircuitOptions& options) {
    const std::size_t delay = delay_in_samples(delta, fs);
    const std::size_t n = sample_count(duration, fs);
    if (delay >= n)
        throw ConfigError("delay must be shorter than the simulated duration");
    const double f_c = osc.spec.carrier();

    CircuitRun run;
    run.inputs = {realize(osc, fs, n, delay)};
    const RealizedOscillator& r = run.inputs.front();
    check_rate(fs, 8.0 * (f_c + std::abs(r.offset)));
    const double hp_cut = options.highpass_cut > 0.0 ? options.highpass_cut : f_c;
    const double freqs[] = {r.frequency(), r.frequency()};
    check_highpass(freqs, hp_cut, fs);

    const Waveform full = waveform_of(osc, r, fs);
    Waveform direct, delayed;
    direct.fs = delayed.fs = fs;
    direct.samples.assign(full.samples.begin() + static_cast<std::ptrdiff_t>(delay), full.samples.end());
    delayed.samples.assign(full.samples.begin(), full.samples.begin() + static_cast<std::ptrdiff_t>(n));

    run.symbolic.omega_prime = r.omega();
    run.symbolic.phase_path_prime = delayed_average_path(r.phase, delay);
    run.symbolic.amplitude = 0.5;

    finish_two_input(run, direct, delayed, f_c, fs, hp_cut, options);

    // The undelayed branch is ahead by D samples of carrier, so the divided
    // phase carries a constant π f D / fs on top of φ.
    const double carrier_lead = pi * r.frequency() * static_cast<double>(delay) / fs;
    run.predicted_phase = offset_ramp(r.offset, fs, n, carrier_lead);
    simd::add_inplace(run.predicted_phase, run.symbolic.phase_path_prime.samples);
    return run;
}

} // namespace pnavg

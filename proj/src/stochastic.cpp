#include "pnavg/stochastic.hpp"

#include "pnavg/error.hpp"
#include "pnavg/parallel.hpp"
#include "pnavg/simd/kernels.hpp"

#include <cmath>
#include <random>
#include <string>

namespace pnavg {

PhasePath wiener_path(double beta, double theta0, double dt, std::size_t n, SeedId seed) {
    if (!std::isfinite(beta) || beta < 0.0)
        throw ParameterError("wiener_path: beta must be finite and non-negative");
    if (!std::isfinite(dt) || dt <= 0.0)
        throw ParameterError("wiener_path: dt must be finite and positive");
    if (!std::isfinite(theta0))
        throw ParameterError("wiener_path: theta0 must be finite");
    if (n == 0)
        throw ParameterError("wiener_path: need at least one sample");

    PhasePath path;
    path.dt = dt;
    path.seed = seed;
    path.samples.assign(n, theta0);
    if (beta == 0.0)
        return path;

    Engine engine = make_engine(seed, StreamPurpose::phase);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double step_std = std::sqrt(two_pi * beta * dt);
    double theta = theta0;
    for (std::size_t k = 1; k < n; ++k) {
        theta += step_std * gauss(engine);
        path.samples[k] = theta;
    }
    return path;
}

std::vector<PhasePath> wiener_ensemble(double beta, double theta0, double dt, std::size_t n,
                                       std::uint64_t master, std::size_t count, std::uint64_t first_index,
                                       unsigned threads) {
    std::vector<PhasePath> paths(count);
    parallel_for(
        count, [&](std::size_t i) { paths[i] = wiener_path(beta, theta0, dt, n, {master, first_index + i}); },
        threads);
    return paths;
}

double sample_offset(const OffsetDistribution& dist, SeedId seed) {
    validate(dist);
    if (const auto* d = std::get_if<DeltaOffset>(&dist))
        return d->value;
    Engine engine = make_engine(seed, StreamPurpose::offset);
    if (const auto* u = std::get_if<UniformOffset>(&dist)) {
        if (u->half_width == 0.0)
            return 0.0;
        return std::uniform_real_distribution<double>(-u->half_width, u->half_width)(engine);
    }
    const auto& nrm = std::get<NormalOffset>(dist);
    if (nrm.sigma == 0.0)
        return 0.0;
    return std::normal_distribution<double>(0.0, nrm.sigma)(engine);
}

double carrier_phase(double f, double fs, std::size_t k) noexcept {
    double cycles = f * static_cast<double>(k) / fs;
    cycles -= std::floor(cycles);
    return two_pi * cycles;
}

Waveform oscillator_waveform(const OscillatorSpec& spec, double f_i, const PhasePath& phase, double fs,
                             std::size_t n) {
    if (!std::isfinite(fs) || fs <= 0.0)
        throw ParameterError("oscillator_waveform: fs must be positive");
    if (!std::isfinite(f_i))
        throw ParameterError("oscillator_waveform: offset must be finite");
    const double required = 8.0 * (spec.carrier() + std::abs(f_i));
    if (fs < required)
        throw SamplingError("oscillator_waveform: fs=" + std::to_string(fs) + " Hz is below the required " +
                                std::to_string(required) + " Hz",
                            required);
    if (std::abs(phase.dt * fs - 1.0) > 1e-9)
        throw ShapeError("oscillator_waveform: phase path dt does not match 1/fs");
    if (phase.size() < n)
        throw ShapeError("oscillator_waveform: phase path shorter than requested waveform");

    const double f = spec.carrier() + f_i;
    Waveform w;
    w.fs = fs;
    w.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        w.samples[k] = std::cos(carrier_phase(f, fs, k) + phase.samples[k]);
    return w;
}

std::vector<cplx> phase_shift(std::span<const double> theta) {
    std::vector<cplx> u(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k)
        u[k] = cplx(std::cos(theta[k]), std::sin(theta[k]));
    return u;
}

std::size_t lag_in_samples(double tau, double dt, std::size_t max_samples) {
    if (!std::isfinite(tau) || tau < 0.0)
        throw RangeError("lag must be finite and non-negative");
    const double ratio = tau / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded))
        throw RangeError("lag is not a multiple of the sample interval");
    if (rounded >= static_cast<double>(max_samples))
        throw RangeError("lag exceeds the path length");
    return static_cast<std::size_t>(rounded);
}

MonteCarloValue phase_shift_autocorr_mc_detailed(std::span<const PhasePath> paths, double tau) {
    if (paths.empty())
        throw ParameterError("phase_shift_autocorr_mc: empty ensemble");
    const double dt = paths.front().dt;
    const std::size_t n = paths.front().size();
    for (const auto& p : paths)
        if (p.dt != dt || p.size() != n)
            throw ShapeError("phase_shift_autocorr_mc: paths differ in dt or length");
    const std::size_t lag = lag_in_samples(tau, dt, n);
    if (lag == 0)
        return {cplx(1.0, 0.0), 0.0}; // |u|^2 = 1 by construction

    std::vector<cplx> per_path(paths.size());
    parallel_for(paths.size(), [&](std::size_t i) {
        const auto u = phase_shift(paths[i].samples);
        per_path[i] = simd::lag_correlation(u, lag) / static_cast<double>(n - lag);
    });
    cplx mean{0.0, 0.0};
    for (const auto& r : per_path)
        mean += r;
    mean /= static_cast<double>(per_path.size());
    double var = 0.0;
    for (const auto& r : per_path)
        var += (r.real() - mean.real()) * (r.real() - mean.real());
    const double count = static_cast<double>(per_path.size());
    const double se = per_path.size() > 1 ? std::sqrt(var / (count - 1.0) / count) : 0.0;
    return {mean, se};
}

cplx phase_shift_autocorr_mc(std::span<const PhasePath> paths, double tau) {
    return phase_shift_autocorr_mc_detailed(paths, tau).value;
}

} // namespace pnavg

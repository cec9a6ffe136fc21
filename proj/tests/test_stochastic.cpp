#include <catch_amalgamated.hpp>

#include "pnavg/demod.hpp"
#include "pnavg/error.hpp"
#include "pnavg/spectral.hpp"
#include "pnavg/stochastic.hpp"

#include <algorithm>
#include <cmath>

using namespace pnavg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("oscillator spec validates and wraps the initial phase") {
    const OscillatorSpec a(1e6, DeltaOffset{0.0}, 10.0, 7.0);
    CHECK_THAT(a.theta0(), WithinAbs(7.0 - two_pi, 1e-15));
    const OscillatorSpec b(1e6, DeltaOffset{0.0}, 10.0, -1.0);
    CHECK_THAT(b.theta0(), WithinAbs(two_pi - 1.0, 1e-15));
    CHECK(OscillatorSpec(1e6, DeltaOffset{0.0}, 0.0, two_pi).theta0() < two_pi);

    CHECK_THROWS_AS(OscillatorSpec(0.0, DeltaOffset{0.0}, 1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(OscillatorSpec(1e6, DeltaOffset{0.0}, -1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(OscillatorSpec(1e6, UniformOffset{-1.0}, 1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(OscillatorSpec(1e6, NormalOffset{-1.0}, 1.0, 0.0), ParameterError);
}

TEST_CASE("zero linewidth gives a constant path") {
    const PhasePath p = wiener_path(0.0, 1.0, 1e-6, 1000, {3, 4});
    CHECK(p.size() == 1000);
    CHECK(std::all_of(p.samples.begin(), p.samples.end(), [](double v) { return v == 1.0; }));
}

TEST_CASE("wiener_path starts at theta0 and is reproducible") {
    const PhasePath a = wiener_path(1e4, 0.25, 1e-6, 500, {11, 2});
    const PhasePath b = wiener_path(1e4, 0.25, 1e-6, 500, {11, 2});
    const PhasePath c = wiener_path(1e4, 0.25, 1e-6, 500, {11, 3});
    CHECK(a.samples.front() == 0.25);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
    CHECK(a.seed == SeedId{11, 2});
}

TEST_CASE("wiener_path rejects bad parameters") {
    CHECK_THROWS_AS(wiener_path(-1.0, 0.0, 1e-6, 10, {}), ParameterError);
    CHECK_THROWS_AS(wiener_path(std::nan(""), 0.0, 1e-6, 10, {}), ParameterError);
    CHECK_THROWS_AS(wiener_path(1.0, 0.0, 0.0, 10, {}), ParameterError);
    CHECK_THROWS_AS(wiener_path(1.0, 0.0, -1e-6, 10, {}), ParameterError);
    CHECK_THROWS_AS(wiener_path(1.0, 0.0, INFINITY, 10, {}), ParameterError);
    CHECK_THROWS_AS(wiener_path(1.0, 0.0, 1e-6, 0, {}), ParameterError);
}

TEST_CASE("ensembles do not depend on thread count or generation order") {
    const auto whole = wiener_ensemble(1e4, 0.0, 1e-6, 64, 99, 10, 0, 1);
    const auto threaded = wiener_ensemble(1e4, 0.0, 1e-6, 64, 99, 10, 0, 4);
    const auto tail = wiener_ensemble(1e4, 0.0, 1e-6, 64, 99, 3, 5, 2);
    for (std::size_t i = 0; i < whole.size(); ++i)
        CHECK(whole[i].samples == threaded[i].samples);
    for (std::size_t i = 0; i < tail.size(); ++i)
        CHECK(tail[i].samples == whole[5 + i].samples);
}

TEST_CASE("variance of the phase grows as 2 pi beta t") {
    // E[(θ_t − θ_0)²] = 2πβt = 2π at β = 1e4, t = 1e-4.
    double sum = 0.0, sq = 0.0;
    constexpr std::size_t paths = 100000;
    for (std::size_t i = 0; i < paths; ++i) {
        const PhasePath p = wiener_path(1e4, 0.0, 1e-4, 2, {7, i});
        const double d = p.samples[1] - p.samples[0];
        sum += d;
        sq += d * d;
    }
    const double var = (sq - sum * sum / paths) / (paths - 1.0);
    CHECK_THAT(var, WithinRel(two_pi, 0.02));
}

TEST_CASE("standardized increments look Gaussian") {
    const double dt = 1e-7, beta = 3e3;
    const PhasePath p = wiener_path(beta, 0.0, dt, 1000001, {5, 0});
    const double sd = std::sqrt(two_pi * beta * dt);
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    const double n = 1e6;
    for (std::size_t k = 1; k < p.size(); ++k) {
        const double z = (p.samples[k] - p.samples[k - 1]) / sd;
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
        m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const double var = m2 - m1 * m1;
    const double skew = (m3 - 3 * m1 * m2 + 2 * m1 * m1 * m1) / std::pow(var, 1.5);
    const double kurt = (m4 - 4 * m1 * m3 + 6 * m1 * m1 * m2 - 3 * m1 * m1 * m1 * m1) / (var * var) - 3.0;
    CHECK(std::abs(m1) < 0.005);
    CHECK_THAT(var, WithinRel(1.0, 0.01));
    CHECK(std::abs(skew) < 0.02);
    CHECK(std::abs(kurt) < 0.05);
}

TEST_CASE("sample_offset draws from the configured distribution") {
    CHECK(sample_offset(DeltaOffset{0.0}, {1, 0}) == 0.0);
    CHECK(sample_offset(DeltaOffset{42.5}, {1, 0}) == 42.5);

    constexpr std::size_t draws = 1000000;
    double us = 0, uq = 0, ns = 0, nq = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double u = sample_offset(UniformOffset{100.0}, {2, i});
        const double g = sample_offset(NormalOffset{50.0}, {3, i});
        REQUIRE(std::abs(u) <= 100.0);
        us += u;
        uq += u * u;
        ns += g;
        nq += g * g;
    }
    const double uvar = (uq - us * us / draws) / (draws - 1.0);
    const double nvar = (nq - ns * ns / draws) / (draws - 1.0);
    CHECK_THAT(uvar, WithinRel(100.0 * 100.0 / 3.0, 0.01));
    CHECK_THAT(std::sqrt(nvar), WithinRel(50.0, 0.01));
    CHECK_THAT(offset_variance(UniformOffset{100.0}), WithinRel(1e4 / 3.0, 1e-15));
}

TEST_CASE("offset and phase streams of one seed are distinct") {
    // The two purposes must not replay the same numbers.
    const PhasePath p = wiener_path(1.0 / two_pi, 0.0, 1.0, 2, {9, 9});
    const double g = sample_offset(NormalOffset{1.0}, {9, 9});
    CHECK(p.samples[1] != g);
}

TEST_CASE("noiseless oscillator is a pure cosine") {
    const double fs = 64e6, f_c = 1e6;
    const std::size_t n = 65536;
    const OscillatorSpec spec(f_c, DeltaOffset{0.0}, 0.0, 0.0);
    const PhasePath phase = wiener_path(0.0, 0.0, 1.0 / fs, n, {});
    const Waveform w = oscillator_waveform(spec, 0.0, phase, fs, n);
    const SpectrumEstimate s = welch_psd(w, {n, 0.0, Window::hann});
    const auto peak = std::max_element(s.psd.begin(), s.psd.end()) - s.psd.begin();
    CHECK(std::abs(s.freqs[static_cast<std::size_t>(peak)] - f_c) <= s.bin_width());
    for (double v : w.samples)
        REQUIRE(std::abs(v) <= 1.0);

    const OscillatorSpec quarter(f_c, DeltaOffset{0.0}, 0.0, pi / 2.0);
    const Waveform q = oscillator_waveform(quarter, 0.0, wiener_path(0.0, quarter.theta0(), 1.0 / fs, 8, {}), fs, 8);
    CHECK_THAT(q.samples[0], WithinAbs(0.0, 1e-15));
}

TEST_CASE("oscillator_waveform enforces the oversampling headroom") {
    const OscillatorSpec spec(1e6, DeltaOffset{0.0}, 0.0, 0.0);
    const double fs = 7.9e6;
    const PhasePath p = wiener_path(0.0, 0.0, 1.0 / fs, 16, {});
    try {
        (void)oscillator_waveform(spec, 0.0, p, fs, 16);
        FAIL("expected SamplingError");
    } catch (const SamplingError& e) {
        CHECK(e.required_rate() == 8e6);
    }
    const PhasePath ok = wiener_path(0.0, 0.0, 1.0 / 8.8e6, 16, {});
    CHECK_THROWS_AS(oscillator_waveform(spec, 1.1e5, ok, 8.8e6, 16), SamplingError);
    CHECK_NOTHROW(oscillator_waveform(spec, 1e5, ok, 8.8e6, 16));
    CHECK_THROWS_AS(oscillator_waveform(spec, 0.0, ok, 16e6, 16), ShapeError);
    CHECK_THROWS_AS(oscillator_waveform(spec, 0.0, ok, 8.8e6, 17), ShapeError);
}

TEST_CASE("demodulating the waveform recovers the phase path") {
    // β is scaled so the phase noise outside the demodulator band is
    // negligible at the 1e-6 rad level.
    const double fs = 64e6, f_c = 1e6, f_i = 250.0;
    const std::size_t n = 1 << 16;
    const OscillatorSpec spec(f_c, DeltaOffset{f_i}, 2.5e-7, 0.0);
    const PhasePath p = wiener_path(spec.beta(), 1.3, 1.0 / fs, n, {21, 0});
    const Waveform w = oscillator_waveform(spec, f_i, p, fs, n);
    const std::size_t guard = 2048;
    const Demodulated d = demodulate(w, f_c, {f_c, guard});
    std::vector<double> expected(n);
    for (std::size_t k = 0; k < n; ++k)
        expected[k] = p.samples[k] + two_pi * f_i * static_cast<double>(k) / fs;
    CHECK(phase_rms_error(d.phase, expected, 2 * guard, two_pi) < 1e-6);
}

TEST_CASE("phase-shift autocorrelation Monte Carlo") {
    const auto paths = wiener_ensemble(1e4, 0.0, 1e-6, 200, 31, 10000);
    CHECK(phase_shift_autocorr_mc(paths, 0.0) == cplx(1.0, 0.0));
    const MonteCarloValue v = phase_shift_autocorr_mc_detailed(paths, 1e-5);
    CHECK_THAT(v.value.real(), WithinRel(std::exp(-pi * 1e4 * 1e-5), 0.02));
    CHECK(std::abs(v.value.imag()) < 5.0 * v.std_error);

    const auto still = wiener_ensemble(0.0, 0.5, 1e-6, 50, 1, 4);
    for (double tau : {1e-6, 1e-5, 4.9e-5})
        CHECK_THAT(phase_shift_autocorr_mc(still, tau).real(), WithinAbs(1.0, 1e-14));

    CHECK_THROWS_AS(phase_shift_autocorr_mc(paths, 2e-4), RangeError);
    CHECK_THROWS_AS(phase_shift_autocorr_mc(paths, 1.5e-6), RangeError);
    CHECK_THROWS_AS(phase_shift_autocorr_mc(paths, -1e-6), RangeError);
}

TEST_CASE("phase-shift correlation is stationary in the anchor time") {
    const double beta = 1e4, dt = 1e-6;
    const std::size_t lag = 10, paths = 20000;
    const auto ens = wiener_ensemble(beta, 0.0, dt, 10 * 20 + lag + 1, 41, paths);
    const double theory = std::exp(-pi * beta * dt * lag);
    for (std::size_t anchor = 0; anchor < 10; ++anchor) {
        const std::size_t t = anchor * 20;
        double sum = 0, sq = 0;
        for (const auto& p : ens) {
            const double re = std::cos(p.samples[t] - p.samples[t + lag]);
            sum += re;
            sq += re * re;
        }
        const double mean = sum / paths;
        const double se = std::sqrt((sq / paths - mean * mean) / (paths - 1.0));
        CHECK(std::abs(mean - theory) < 3.0 * se);
    }
}

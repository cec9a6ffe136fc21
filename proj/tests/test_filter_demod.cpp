#include <catch_amalgamated.hpp>

#include "pnavg/demod.hpp"
#include "pnavg/error.hpp"
#include "pnavg/filter.hpp"

#include <cmath>
#include <numeric>

using namespace pnavg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double fs = 16e6;
constexpr std::size_t n = 1 << 15;
constexpr double df = fs / n;

// Sum of unit tones at bin-aligned frequencies.
Waveform tones(std::initializer_list<double> bins) {
    Waveform w;
    w.fs = fs;
    w.samples.assign(n, 0.0);
    for (double b : bins)
        for (std::size_t k = 0; k < n; ++k)
            w.samples[k] += std::cos(two_pi * b * static_cast<double>(k) / static_cast<double>(n) + 0.3);
    return w;
}

// Amplitude of the component at `bin`, by projection over [lo, hi). The
// window spans a whole number of periods of every tone used here.
double amplitude_at(const Waveform& w, double bin, std::size_t lo, std::size_t hi) {
    double c = 0, s = 0;
    for (std::size_t k = lo; k < hi; ++k) {
        const double ph = two_pi * bin * static_cast<double>(k) / static_cast<double>(n);
        c += w.samples[k] * std::cos(ph);
        s += w.samples[k] * std::sin(ph);
    }
    return 2.0 * std::hypot(c, s) / static_cast<double>(hi - lo);
}

} // namespace

TEST_CASE("brick-wall filters split two tones") {
    // 1 MHz and 3 MHz, cut at 2 MHz.
    const double lo_bin = 1e6 / df, hi_bin = 3e6 / df;
    const Waveform w = tones({lo_bin, hi_bin});
    const Waveform lp = ideal_filter(w, FilterKind::lowpass, 2e6);
    const Waveform hp = ideal_filter(w, FilterKind::highpass, 2e6);
    CHECK_THAT(amplitude_at(lp, lo_bin, 0, n), WithinRel(1.0, 1e-6));
    CHECK_THAT(amplitude_at(hp, hi_bin, 0, n), WithinRel(1.0, 1e-6));
    CHECK(20.0 * std::log10(amplitude_at(lp, hi_bin, 0, n)) < -80.0);
    CHECK(20.0 * std::log10(amplitude_at(hp, lo_bin, 0, n)) < -80.0);
    CHECK(lp.fs == fs);
    CHECK(lp.size() == n);
}

TEST_CASE("brick-wall lowpass and highpass are complements") {
    Waveform w;
    w.fs = fs;
    w.samples.resize(4096);
    for (std::size_t k = 0; k < w.size(); ++k)
        w.samples[k] = std::sin(0.001 * k * k) + 0.1 * std::cos(2.1 * k);
    for (double cut : {1e5, 2e6, 7.9e6}) {
        const Waveform lp = ideal_filter(w, FilterKind::lowpass, cut);
        const Waveform hp = ideal_filter(w, FilterKind::highpass, cut);
        for (std::size_t k = 0; k < w.size(); ++k)
            REQUIRE_THAT(lp.samples[k] + hp.samples[k], WithinAbs(w.samples[k], 1e-12));
    }
}

TEST_CASE("FIR filters split two tones after their transient") {
    const double lo_bin = 1e6 / df, hi_bin = 3e6 / df;
    const Waveform w = tones({lo_bin, hi_bin});
    FilterOptions opt;
    opt.mode = FilterMode::fir;
    const std::size_t transient = filter_transient(opt, fs, 2e6);
    REQUIRE(4 * transient < n);
    // Interior of whole periods for both tones (bins are multiples of 4096/16 at this size).
    const std::size_t lo = 4096, hi = n - 4096;
    REQUIRE(lo >= transient);
    const Waveform lp = ideal_filter(w, FilterKind::lowpass, 2e6, opt);
    const Waveform hp = ideal_filter(w, FilterKind::highpass, 2e6, opt);
    CHECK_THAT(amplitude_at(lp, lo_bin, lo, hi), WithinRel(1.0, 1e-4));
    CHECK_THAT(amplitude_at(hp, hi_bin, lo, hi), WithinRel(1.0, 1e-4));
    CHECK(20.0 * std::log10(amplitude_at(lp, hi_bin, lo, hi)) < -80.0);
    CHECK(20.0 * std::log10(amplitude_at(hp, lo_bin, lo, hi)) < -80.0);

    // No group delay: the filtered low tone is in phase with the input tone.
    const Waveform pure = tones({lo_bin});
    for (std::size_t k = lo; k < hi; k += 97)
        REQUIRE_THAT(lp.samples[k], WithinAbs(pure.samples[k], 1e-4));
}

TEST_CASE("filters reject cutoffs outside (0, Nyquist)") {
    const Waveform w = tones({10.0});
    for (double cut : {0.0, -1.0, fs / 2.0, fs, std::nan("")}) {
        CHECK_THROWS_AS(ideal_filter(w, FilterKind::lowpass, cut), ParameterError);
        CHECK_THROWS_AS(ideal_filter(w, FilterKind::highpass, cut), ParameterError);
    }
    std::vector<cplx> z(8);
    CHECK_THROWS_AS(brickwall_lowpass(z, fs, fs / 2.0), ParameterError);
    CHECK_THROWS_AS(brickwall_lowpass(z, 0.0, 1.0), ParameterError);
}

TEST_CASE("Kaiser lowpass taps") {
    const auto taps = design_kaiser_lowpass(2e6, 5e5, 90.0, fs);
    CHECK(taps.size() % 2 == 1);
    CHECK_THAT(std::accumulate(taps.begin(), taps.end(), 0.0), WithinAbs(1.0, 1e-14));
    for (std::size_t k = 0; k < taps.size(); ++k)
        REQUIRE(taps[k] == taps[taps.size() - 1 - k]);
    // Narrower transition needs more taps.
    CHECK(design_kaiser_lowpass(2e6, 2.5e5, 90.0, fs).size() > taps.size());
    CHECK_THROWS_AS(design_kaiser_lowpass(2e6, 0.0, 90.0, fs), ParameterError);
    CHECK_THROWS_AS(design_kaiser_lowpass(2e6, 5e5, -1.0, fs), ParameterError);
}

TEST_CASE("filter_transient covers the taper and the tap span") {
    FilterOptions bw;
    bw.edge_taper = 1000;
    CHECK(filter_transient(bw, fs, 2e6) >= 1000);
    FilterOptions fir;
    fir.mode = FilterMode::fir;
    CHECK(filter_transient(fir, fs, 2e6) >= design_kaiser_lowpass(2e6, 2e6, 90.0, fs).size());
}

TEST_CASE("unwrap_from removes 2 pi jumps around any anchor") {
    std::vector<double> truth(500);
    for (std::size_t k = 0; k < truth.size(); ++k)
        truth[k] = 0.05 * static_cast<double>(k) - 3.0 + 0.4 * std::sin(0.1 * k);
    for (std::size_t anchor : {0u, 250u, 499u}) {
        std::vector<double> wrapped(truth.size());
        for (std::size_t k = 0; k < truth.size(); ++k)
            wrapped[k] = std::remainder(truth[k], two_pi);
        unwrap_from(wrapped, anchor);
        const double shift = wrapped[anchor] - truth[anchor];
        CHECK_THAT(shift / two_pi, WithinAbs(std::round(shift / two_pi), 1e-12));
        for (std::size_t k = 0; k < truth.size(); ++k)
            REQUIRE_THAT(wrapped[k] - shift, WithinAbs(truth[k], 1e-12));
    }
    std::vector<double> empty;
    CHECK_NOTHROW(unwrap_from(empty, 0));
    std::vector<double> one{1.0};
    CHECK_THROWS_AS(unwrap_from(one, 1), RangeError);
}

TEST_CASE("demodulate recovers amplitude and phase of a modulated tone") {
    const double f = 2e6;
    Waveform w;
    w.fs = fs;
    w.samples.resize(n);
    std::vector<double> phase(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / fs;
        phase[k] = 5.0 + 0.8 * std::sin(two_pi * 244.140625 * t);
        w.samples[k] = 0.5 * std::cos(two_pi * f * t + phase[k]);
    }
    const Demodulated d = demodulate(w, f);
    CHECK(d.nominal_frequency == f);
    CHECK(d.phase.size() == n);
    CHECK(std::abs(d.phase[n / 2]) <= pi);
    CHECK(phase_rms_error(d.phase, phase, 256, two_pi) < 1e-6);
    for (std::size_t k = 256; k < n - 256; k += 101)
        REQUIRE_THAT(d.amplitude[k], WithinAbs(0.5, 1e-6));

    CHECK_THROWS_AS(demodulate(w, 0.0), ParameterError);
    CHECK_THROWS_AS(demodulate(Waveform{}, f), ShapeError);
}

TEST_CASE("phase_rms_error removes only whole multiples of the ambiguity") {
    std::vector<double> ref(100, 0.0), est(100, two_pi + 0.01);
    CHECK_THAT(phase_rms_error(est, ref, 0, two_pi), WithinAbs(0.01, 1e-12));
    CHECK_THAT(phase_rms_error(est, ref, 0, 0.0), WithinAbs(two_pi + 0.01, 1e-12));
    std::vector<double> half(100, pi);
    CHECK_THAT(phase_rms_error(half, ref, 0, pi), WithinAbs(0.0, 1e-15));
    CHECK_THAT(phase_rms_error(half, ref, 0, two_pi), WithinAbs(pi, 1e-12));
    CHECK_THROWS_AS(phase_rms_error(half, std::vector<double>(99), 0, pi), ShapeError);
    CHECK_THROWS_AS(phase_rms_error(half, ref, 50, pi), RangeError);
}

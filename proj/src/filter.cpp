#include "pnavg/filter.hpp"

#include "pnavg/error.hpp"
#include "pnavg/fft.hpp"
#include "pnavg/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace pnavg {

namespace {

void check_cutoff(double fs, double f_cut) {
    if (!std::isfinite(fs) || fs <= 0.0)
        throw ParameterError("filter: sample rate must be positive");
    if (!std::isfinite(f_cut) || f_cut <= 0.0 || f_cut >= fs / 2.0)
        throw ParameterError("filter: cutoff must lie strictly between 0 and Nyquist");
}

template <class T>
void apply_taper(std::vector<T>& x, std::size_t taper) {
    const std::size_t n = x.size();
    const std::size_t len = std::min(taper, n / 2);
    // Planck taper: smooth to all orders, so its spectrum decays faster than
    // any power and the brick-wall mask cannot ring far into the interior.
    for (std::size_t k = 0; k < len; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(len);
        const double g = 1.0 / (1.0 + std::exp(1.0 / u - 1.0 / (1.0 - u)));
        x[k] *= g;
        x[n - 1 - k] *= g;
    }
}

// Circular mask. Periodic inputs are filtered exactly; other inputs need an
// edge taper so the wrap-around joins two near-zero ends.
std::vector<cplx> masked(std::vector<cplx> x, double fs, double f_cut, FilterKind kind) {
    const std::size_t m = x.size();
    fft::forward(x);
    for (std::size_t k = 0; k < m; ++k) {
        const double f = std::abs(fft::bin_frequency(k, m, fs));
        const bool pass = kind == FilterKind::lowpass ? f <= f_cut : f > f_cut;
        if (!pass)
            x[k] = cplx(0.0, 0.0);
    }
    fft::inverse(x);
    const double scale = 1.0 / static_cast<double>(m);
    for (auto& v : x)
        v *= scale;
    return x;
}

double kaiser_beta(double atten) {
    if (atten > 50.0)
        return 0.1102 * (atten - 8.7);
    if (atten >= 21.0)
        return 0.5842 * std::pow(atten - 21.0, 0.4) + 0.07886 * (atten - 21.0);
    return 0.0;
}

std::vector<double> fir_filter(std::span<const double> x, std::span<const double> taps) {
    const std::size_t n = x.size();
    const std::size_t len = taps.size();
    const std::size_t half = len / 2;
    std::vector<double> reversed(taps.rbegin(), taps.rend());
    // Pad so the centered convolution can read half taps past either end.
    std::vector<double> padded(n + 2 * half, 0.0);
    std::copy(x.begin(), x.end(), padded.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k)
        y[k] = simd::dot(std::span<const double>(padded).subspan(k, len), reversed);
    return y;
}

} // namespace

std::vector<cplx> brickwall_lowpass(std::span<const cplx> x, double fs, double f_cut, std::size_t edge_taper) {
    if (!std::isfinite(fs) || fs <= 0.0)
        throw ParameterError("filter: sample rate must be positive");
    if (!std::isfinite(f_cut) || f_cut <= 0.0 || f_cut >= fs / 2.0)
        throw ParameterError("filter: cutoff must lie strictly between 0 and Nyquist");
    std::vector<cplx> v(x.begin(), x.end());
    apply_taper(v, edge_taper);
    return masked(std::move(v), fs, f_cut, FilterKind::lowpass);
}

std::vector<double> design_kaiser_lowpass(double f_cut, double transition_hz, double stopband_db, double fs) {
    check_cutoff(fs, f_cut);
    if (!(transition_hz > 0.0) || !(stopband_db > 0.0))
        throw ParameterError("design_kaiser_lowpass: transition and attenuation must be positive");
    const double dw = two_pi * transition_hz / fs;
    auto len = static_cast<std::size_t>(std::ceil((stopband_db - 7.95) / (2.285 * dw))) + 1;
    if (len % 2 == 0)
        ++len;
    const double beta = kaiser_beta(stopband_db);
    const double i0_beta = std::cyl_bessel_i(0.0, beta);
    const double fc = f_cut / fs;
    const auto mid = static_cast<double>(len - 1) / 2.0;
    std::vector<double> taps(len);
    double sum = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        const double m = static_cast<double>(k) - mid;
        const double sinc = m == 0.0 ? 2.0 * fc : std::sin(two_pi * fc * m) / (pi * m);
        const double r = m / mid;
        const double win = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
        taps[k] = sinc * win;
        sum += taps[k];
    }
    for (auto& t : taps)
        t /= sum;
    return taps;
}

std::size_t filter_transient(const FilterOptions& options, double fs, double f_cut) {
    check_cutoff(fs, f_cut);
    const auto settle = static_cast<std::size_t>(std::ceil(4.0 * fs / f_cut));
    if (options.mode == FilterMode::brickwall)
        return std::max(options.edge_taper, settle);
    double transition = options.transition_hz > 0.0 ? options.transition_hz : std::min(f_cut, fs / 2.0 - f_cut);
    return std::max(design_kaiser_lowpass(f_cut, transition, options.stopband_db, fs).size(), settle);
}

Waveform ideal_filter(const Waveform& w, FilterKind kind, double f_cut, const FilterOptions& options) {
    check_cutoff(w.fs, f_cut);
    Waveform out;
    out.fs = w.fs;
    out.t0 = w.t0;
    if (w.samples.empty())
        return out;

    if (options.mode == FilterMode::brickwall) {
        std::vector<cplx> v(w.samples.begin(), w.samples.end());
        apply_taper(v, options.edge_taper);
        v = masked(std::move(v), w.fs, f_cut, kind);
        out.samples.resize(v.size());
        for (std::size_t k = 0; k < v.size(); ++k)
            out.samples[k] = v[k].real();
        return out;
    }

    const double transition =
        options.transition_hz > 0.0 ? options.transition_hz : std::min(f_cut, w.fs / 2.0 - f_cut);
    auto taps = design_kaiser_lowpass(f_cut, transition, options.stopband_db, w.fs);
    if (kind == FilterKind::highpass) {
        for (auto& t : taps)
            t = -t;
        taps[taps.size() / 2] += 1.0;
    }
    out.samples = fir_filter(w.samples, taps);
    return out;
}

} // namespace pnavg

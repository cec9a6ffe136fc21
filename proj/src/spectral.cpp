#include "pnavg/spectral.hpp"

#include "pnavg/analytic.hpp"
#include "pnavg/error.hpp"
#include "pnavg/fft.hpp"
#include "pnavg/parallel.hpp"
#include "pnavg/simd/kernels.hpp"
#include "pnavg/stochastic.hpp"

#include <algorithm>
#include <cmath>

namespace pnavg {

double SpectrumEstimate::bin_width() const noexcept {
    if (freqs.size() < 2)
        return fs;
    return freqs[1] - freqs[0];
}

std::vector<double> SpectrumEstimate::dbc_hz() const {
    std::vector<double> out(psd.size());
    std::transform(psd.begin(), psd.end(), out.begin(), to_dbc_hz);
    return out;
}

std::vector<double> make_window(Window w, std::size_t n) {
    std::vector<double> out(n, 1.0);
    if (w == Window::hann)
        for (std::size_t k = 0; k < n; ++k)
            out[k] = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(k) / static_cast<double>(n));
    return out;
}

namespace {

void check_options(const WelchOptions& o, std::size_t length) {
    if (o.segment_len < 2)
        throw ParameterError("welch_psd: segment length must be at least 2");
    if (!(o.overlap >= 0.0 && o.overlap < 1.0))
        throw ParameterError("welch_psd: overlap must be in [0, 1)");
    if (o.segment_len > length)
        throw ShapeError("welch_psd: segment length " + std::to_string(o.segment_len) + " exceeds data length " +
                         std::to_string(length));
}

// Raw (unshifted, FFT-order) averaged periodogram.
struct RawPeriodogram {
    std::vector<double> acc;
    std::size_t segments = 0;
};

RawPeriodogram raw_welch(std::span<const cplx> x, double fs, const WelchOptions& o) {
    check_options(o, x.size());
    if (!std::isfinite(fs) || fs <= 0.0)
        throw ParameterError("welch_psd: fs must be positive");
    const std::size_t len = o.segment_len;
    const auto hop = std::max<std::size_t>(
        1, len - static_cast<std::size_t>(std::llround(o.overlap * static_cast<double>(len))));
    const std::vector<double> window = make_window(o.window, len);
    double w2 = 0.0;
    for (double v : window)
        w2 += v * v;

    RawPeriodogram raw;
    raw.acc.assign(len, 0.0);
    std::vector<cplx> seg(len);
    for (std::size_t start = 0; start + len <= x.size(); start += hop) {
        simd::window_complex(x.subspan(start, len), window, seg);
        fft::forward(seg);
        simd::accumulate_norm(raw.acc, seg);
        ++raw.segments;
    }
    simd::divide_inplace(raw.acc, fs * w2 * static_cast<double>(raw.segments));
    return raw;
}

SpectrumEstimate two_sided(const RawPeriodogram& raw, double fs) {
    const std::size_t len = raw.acc.size();
    const std::size_t start = (len + 1) / 2;
    SpectrumEstimate s;
    s.fs = fs;
    s.n_segments = raw.segments;
    s.sidedness = Sidedness::two;
    s.freqs.resize(len);
    s.psd.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t m = (start + i) % len;
        s.freqs[i] = fft::bin_frequency(m, len, fs);
        s.psd[i] = raw.acc[m];
    }
    return s;
}

} // namespace

SpectrumEstimate welch_psd(std::span<const cplx> x, double fs, const WelchOptions& options) {
    return two_sided(raw_welch(x, fs, options), fs);
}

SpectrumEstimate welch_psd(const Waveform& w, const WelchOptions& options) {
    std::vector<cplx> x(w.samples.begin(), w.samples.end());
    const RawPeriodogram raw = raw_welch(x, w.fs, options);
    const std::size_t len = raw.acc.size();
    SpectrumEstimate s;
    s.fs = w.fs;
    s.n_segments = raw.segments;
    s.sidedness = Sidedness::one;
    for (std::size_t m = 0; m <= len / 2; ++m) {
        const bool edge = m == 0 || 2 * m == len;
        s.freqs.push_back(w.fs * static_cast<double>(m) / static_cast<double>(len));
        s.psd.push_back(edge ? raw.acc[m] : 2.0 * raw.acc[m]);
    }
    return s;
}

double integrated_power(const SpectrumEstimate& s) {
    double total = 0.0;
    for (std::size_t i = 1; i < s.freqs.size(); ++i)
        total += 0.5 * (s.psd[i] + s.psd[i - 1]) * (s.freqs[i] - s.freqs[i - 1]);
    return total;
}

namespace {

// Members are processed in fixed-size batches: estimated in parallel, then
// folded into the running sums in index order.
constexpr std::size_t batch_size = 64;

template <class Estimate, class Fold>
void batched(std::size_t members, unsigned threads, Estimate&& estimate, Fold&& fold) {
    for (std::size_t first = 0; first < members; first += batch_size) {
        const std::size_t count = std::min(batch_size, members - first);
        std::vector<std::vector<double>> results(count);
        parallel_for(count, [&](std::size_t i) { results[i] = estimate(first + i); }, threads);
        for (auto& r : results)
            fold(r);
    }
}

} // namespace

EnsembleSpectrum ensemble_psd(std::size_t members, const SequenceSource& make, double fs,
                              const WelchOptions& options, unsigned threads) {
    if (members == 0)
        throw ParameterError("ensemble_psd: empty ensemble");
    std::vector<double> sum, sum_sq;
    std::size_t segments = 0;
    batched(
        members, threads,
        [&](std::size_t i) {
            const std::vector<cplx> x = make(i);
            RawPeriodogram raw = raw_welch(x, fs, options);
            if (i == 0)
                segments = raw.segments;
            return std::move(raw.acc);
        },
        [&](const std::vector<double>& r) {
            if (sum.empty()) {
                sum.assign(r.size(), 0.0);
                sum_sq.assign(r.size(), 0.0);
            }
            if (r.size() != sum.size())
                throw ShapeError("ensemble_psd: members differ in length");
            for (std::size_t m = 0; m < r.size(); ++m) {
                sum[m] += r[m];
                sum_sq[m] += r[m] * r[m];
            }
        });

    const auto n = static_cast<double>(members);
    RawPeriodogram mean{sum, segments};
    simd::divide_inplace(mean.acc, n);
    std::vector<double> se_raw(sum.size(), 0.0);
    if (members > 1)
        for (std::size_t m = 0; m < sum.size(); ++m) {
            const double var = std::max(0.0, (sum_sq[m] - sum[m] * sum[m] / n) / (n - 1.0));
            se_raw[m] = std::sqrt(var / n);
        }

    EnsembleSpectrum out;
    out.mean = two_sided(mean, fs);
    out.mean.n_segments = segments * members;
    const SpectrumEstimate se = two_sided(RawPeriodogram{se_raw, segments}, fs);
    out.std_error = se.psd;
    out.members = members;
    return out;
}

EnsembleSpectrum psd_of_phase_shift(std::span<const PhasePath> paths, const WelchOptions& options,
                                    unsigned threads) {
    if (paths.empty())
        throw ParameterError("psd_of_phase_shift: empty ensemble");
    const double dt = paths.front().dt;
    for (const auto& p : paths)
        if (p.dt != dt)
            throw ShapeError("psd_of_phase_shift: paths differ in dt");
    return ensemble_psd(
        paths.size(), [&](std::size_t i) { return phase_shift(paths[i].samples); }, 1.0 / dt, options, threads);
}

namespace {

std::vector<double> member_autocorr(std::span<const cplx> x, std::size_t max_lag, bool unbiased) {
    if (max_lag >= x.size())
        throw RangeError("autocorr_estimate: max_lag must be below the sequence length");
    // Interleaved re/im so the batch fold works on doubles.
    std::vector<double> out(2 * (max_lag + 1));
    const auto n = static_cast<double>(x.size());
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        const cplx c = simd::lag_correlation(x, lag) / (unbiased ? n - static_cast<double>(lag) : n);
        out[2 * lag] = c.real();
        out[2 * lag + 1] = c.imag();
    }
    return out;
}

} // namespace

AutocorrEstimate autocorr_estimate(std::size_t members, const SequenceSource& make, std::size_t max_lag,
                                   double dt, bool unbiased, unsigned threads) {
    if (members == 0)
        throw ParameterError("autocorr_estimate: empty ensemble");
    std::vector<double> sum(2 * (max_lag + 1), 0.0), sum_sq(max_lag + 1, 0.0);
    batched(
        members, threads, [&](std::size_t i) { return member_autocorr(make(i), max_lag, unbiased); },
        [&](const std::vector<double>& r) {
            for (std::size_t j = 0; j < sum.size(); ++j)
                sum[j] += r[j];
            for (std::size_t lag = 0; lag <= max_lag; ++lag)
                sum_sq[lag] += r[2 * lag] * r[2 * lag];
        });
    const auto n = static_cast<double>(members);
    AutocorrEstimate out;
    out.dt = dt;
    out.values.resize(max_lag + 1);
    out.std_error.assign(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        const double re = sum[2 * lag];
        out.values[lag] = cplx(re / n, sum[2 * lag + 1] / n);
        if (members > 1)
            out.std_error[lag] = std::sqrt(std::max(0.0, (sum_sq[lag] - re * re / n) / (n - 1.0)) / n);
    }
    return out;
}

AutocorrEstimate autocorr_estimate(std::span<const std::vector<cplx>> ensemble, std::size_t max_lag, double dt,
                                   bool unbiased) {
    return autocorr_estimate(
        ensemble.size(), [&](std::size_t i) { return ensemble[i]; }, max_lag, dt, unbiased, 1);
}

} // namespace pnavg

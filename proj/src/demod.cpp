#include "pnavg/demod.hpp"

#include "pnavg/error.hpp"
#include "pnavg/filter.hpp"
#include "pnavg/stochastic.hpp"

#include <cmath>

namespace pnavg {

void unwrap_from(std::span<double> phase, std::size_t anchor) {
    if (phase.empty())
        return;
    if (anchor >= phase.size())
        throw RangeError("unwrap_from: anchor outside sequence");
    auto step = [](double prev, double cur) {
        double d = cur - prev;
        d -= two_pi * std::round(d / two_pi);
        return prev + d;
    };
    for (std::size_t k = anchor + 1; k < phase.size(); ++k)
        phase[k] = step(phase[k - 1], phase[k]);
    for (std::size_t k = anchor; k-- > 0;)
        phase[k] = step(phase[k + 1], phase[k]);
}

Demodulated demodulate(const Waveform& w, double nominal_frequency, const DemodOptions& options) {
    if (!std::isfinite(nominal_frequency) || nominal_frequency <= 0.0)
        throw ParameterError("demodulate: nominal frequency must be positive");
    if (w.samples.empty())
        throw ShapeError("demodulate: empty waveform");
    const double bandwidth = options.bandwidth > 0.0 ? options.bandwidth : nominal_frequency;

    std::vector<cplx> z(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double ph = carrier_phase(nominal_frequency, w.fs, k);
        z[k] = 2.0 * w.samples[k] * cplx(std::cos(ph), -std::sin(ph));
    }
    z = brickwall_lowpass(z, w.fs, bandwidth, options.edge_taper);

    Demodulated out;
    out.fs = w.fs;
    out.nominal_frequency = nominal_frequency;
    out.phase.resize(z.size());
    out.amplitude.resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        out.phase[k] = std::arg(z[k]);
        out.amplitude[k] = std::abs(z[k]);
    }
    unwrap_from(out.phase, z.size() / 2);
    return out;
}

double phase_rms_error(std::span<const double> estimate, std::span<const double> reference, std::size_t trim,
                       double ambiguity) {
    if (estimate.size() != reference.size())
        throw ShapeError("phase_rms_error: length mismatch");
    if (2 * trim >= estimate.size())
        throw RangeError("phase_rms_error: trim leaves no samples");
    const std::size_t n = estimate.size() - 2 * trim;
    double mean = 0.0;
    for (std::size_t k = trim; k < trim + n; ++k)
        mean += estimate[k] - reference[k];
    mean /= static_cast<double>(n);
    const double shift = ambiguity > 0.0 ? ambiguity * std::round(mean / ambiguity) : 0.0;
    double acc = 0.0;
    for (std::size_t k = trim; k < trim + n; ++k) {
        const double e = estimate[k] - reference[k] - shift;
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

} // namespace pnavg

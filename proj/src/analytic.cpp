#include "pnavg/analytic.hpp"

#include "pnavg/error.hpp"
#include "pnavg/types.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace pnavg {

namespace {

void require_beta(double beta) {
    if (!std::isfinite(beta) || beta < 0.0)
        throw ParameterError("beta must be finite and non-negative");
}

void require_positive_beta(double beta, const char* where) {
    require_beta(beta);
    if (beta == 0.0)
        throw DegenerateModelError(std::string(where) + ": zero linewidth has a delta spectrum");
}

void require_time(double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw ParameterError("time arguments must be finite and non-negative");
}

} // namespace

double phase_shift_autocorr(double beta, double tau) {
    require_beta(beta);
    return std::exp(-pi * beta * std::abs(tau));
}

double lorentzian_psd(double beta, double omega) {
    require_positive_beta(beta, "lorentzian_psd");
    const double half = pi * beta / 2.0;
    return pi * beta / (half * half + omega * omega);
}

double phase_shift_psd(double beta, double omega) {
    require_positive_beta(beta, "phase_shift_psd");
    const double a = pi * beta;
    return 2.0 * a / (a * a + omega * omega);
}

double half_variance_psd(double beta, double omega) {
    require_positive_beta(beta, "half_variance_psd");
    const double a = pi * beta / 2.0;
    return 2.0 * a / (a * a + omega * omega);
}

double wiener_autocov(double beta, double t1, double t2) {
    require_beta(beta);
    require_time(t1);
    require_time(t2);
    return two_pi * beta * std::min(t1, t2);
}

double averaged_autocorr(double beta, double t1, double t2) {
    require_beta(beta);
    require_time(t1);
    require_time(t2);
    return pi * beta * std::min(t1, t2);
}

double bates2_pdf(double f_o, double x) {
    if (!std::isfinite(f_o) || f_o <= 0.0)
        throw ParameterError("bates2_pdf: f_o must be positive");
    const double ax = std::abs(x);
    if (ax >= f_o)
        return 0.0;
    return (f_o - ax) / (f_o * f_o);
}

double bates2_cdf(double f_o, double x) {
    if (!std::isfinite(f_o) || f_o <= 0.0)
        throw ParameterError("bates2_cdf: f_o must be positive");
    if (x <= -f_o)
        return 0.0;
    if (x >= f_o)
        return 1.0;
    if (x <= 0.0)
        return (x + f_o) * (x + f_o) / (2.0 * f_o * f_o);
    return 1.0 - (f_o - x) * (f_o - x) / (2.0 * f_o * f_o);
}

void validate(const DelayedAvgParams& p) {
    require_beta(p.beta);
    if (!std::isfinite(p.delta) || p.delta < 0.0)
        throw ParameterError("delay must be finite and non-negative");
}

double delayed_avg_autocorr(const DelayedAvgParams& p, double tau) {
    validate(p);
    const double at = std::abs(tau);
    if (at < p.delta)
        return std::exp(-pi * p.beta * at / 2.0);
    return std::exp(-pi * p.beta * (at - p.delta / 2.0));
}

double delayed_avg_psd(const DelayedAvgParams& p, double omega) {
    validate(p);
    require_positive_beta(p.beta, "delayed_avg_psd");
    const double a = pi * p.beta;
    const double half = a / 2.0;
    const double decay = std::exp(-a * p.delta / 2.0);
    const double c = std::cos(omega * p.delta);
    const double s = std::sin(omega * p.delta);
    const double w2 = omega * omega;
    const double overlap = decay / (a * a + w2) * (2.0 * a * c - 2.0 * omega * s);
    const double inner = decay / (half * half + w2) * (a * c - 2.0 * omega * s);
    const double independent = a / (half * half + w2);
    return overlap - inner + independent;
}

QuadratureResult fourier_quadrature(const std::function<double(double)>& autocorr, double omega,
                                    double tail_rate, const QuadratureOptions& options) {
    if (!std::isfinite(tail_rate) || tail_rate <= 0.0)
        throw TruncationError("fourier_quadrature: tail_rate must be positive and finite");
    if (!std::isfinite(omega))
        throw ParameterError("fourier_quadrature: omega must be finite");
    if (!(options.tail_tolerance > 0.0 && options.tail_tolerance < 1.0))
        throw ParameterError("fourier_quadrature: tail_tolerance must lie in (0, 1)");

    std::vector<double> knots{0.0};
    for (double b : options.breakpoints) {
        if (!std::isfinite(b) || b < 0.0)
            throw ParameterError("fourier_quadrature: breakpoints must be finite and non-negative");
        if (b > 0.0)
            knots.push_back(b);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    const double anchor = knots.back();
    const double anchor_value = std::max(std::abs(autocorr(anchor)), std::abs(autocorr(-anchor)));
    const double span = std::log(1.0 / options.tail_tolerance) / tail_rate;
    const double limit = anchor + span;

    // Check the envelope on a few probes; a function that fails to decay at
    // the promised rate cannot be truncated with a known error.
    for (int k = 1; k <= 8; ++k) {
        const double tau = anchor + span * k / 8.0;
        const double bound = anchor_value * std::exp(-tail_rate * (tau - anchor)) * (1.0 + 1e-9) + 1e-300;
        if (std::abs(autocorr(tau)) > bound || std::abs(autocorr(-tau)) > bound)
            throw TruncationError("fourier_quadrature: autocorrelation does not decay at tail_rate");
    }
    knots.push_back(limit);

    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    // Chunks no longer than one oscillation period and one decay length, so
    // the 31-point rule is already converged and adaptivity rarely triggers.
    double chunk = 1.0 / tail_rate;
    if (omega != 0.0)
        chunk = std::min(chunk, two_pi / std::abs(omega));

    QuadratureResult result;
    result.limit = limit;
    auto integrate_piece = [&](double lo, double hi) {
        const double len = hi - lo;
        const auto pieces = static_cast<std::size_t>(std::clamp(std::ceil(len / chunk), 1.0, 1e6));
        for (std::size_t i = 0; i < pieces; ++i) {
            const double a = lo + len * static_cast<double>(i) / static_cast<double>(pieces);
            const double b = (i + 1 == pieces) ? hi : lo + len * static_cast<double>(i + 1) / static_cast<double>(pieces);
            double err_re = 0.0, err_im = 0.0;
            result.real += Rule::integrate([&](double t) { return autocorr(t) * std::cos(omega * t); }, a, b,
                                           options.max_depth, options.tolerance, &err_re);
            // sin(0 t) is identically zero; the relative error test can never
            // be met on it.
            if (omega != 0.0)
                result.imag += Rule::integrate([&](double t) { return -autocorr(t) * std::sin(omega * t); }, a, b,
                                               options.max_depth, options.tolerance, &err_im);
            result.error_estimate += std::abs(err_re) + std::abs(err_im);
        }
    };
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        integrate_piece(knots[k], knots[k + 1]);
        integrate_piece(-knots[k + 1], -knots[k]);
    }
    return result;
}

double psd_by_quadrature(const std::function<double(double)>& autocorr, double omega, double tail_rate,
                         const QuadratureOptions& options) {
    return fourier_quadrature(autocorr, omega, tail_rate, options).real;
}

double to_dbc_hz(double psd_linear) {
    if (!(psd_linear > 0.0) || !std::isfinite(psd_linear))
        throw DomainError("to_dbc_hz: PSD must be positive and finite");
    return 10.0 * std::log10(psd_linear);
}

std::string_view source_name(CurveSource s) {
    switch (s) {
    case CurveSource::phase_shift_autocorr:
        return "phase_shift_autocorr";
    case CurveSource::lorentzian:
        return "lorentzian";
    case CurveSource::delayed_autocorr:
        return "delayed_autocorr";
    case CurveSource::delayed_psd:
        return "delayed_psd";
    case CurveSource::phase_shift_transform:
        return "phase_shift_transform";
    case CurveSource::delayed_psd_quadrature:
        return "delayed_psd_quadrature";
    case CurveSource::half_variance_transform:
        return "half_variance_transform";
    }
    return "unknown";
}

AnalyticCurve analytic_curve(CurveSource source, double beta, double delta, std::span<const double> grid) {
    AnalyticCurve curve;
    curve.source = source;
    curve.grid.assign(grid.begin(), grid.end());
    curve.values.reserve(grid.size());
    const DelayedAvgParams p{beta, delta};
    const bool lag_axis = source == CurveSource::phase_shift_autocorr || source == CurveSource::delayed_autocorr;
    curve.axis = lag_axis ? CurveAxis::lag_seconds : CurveAxis::frequency_hz;
    for (double x : grid) {
        const double omega = two_pi * x;
        double v = 0.0;
        switch (source) {
        case CurveSource::phase_shift_autocorr:
            v = phase_shift_autocorr(beta, x);
            break;
        case CurveSource::lorentzian:
            v = lorentzian_psd(beta, omega);
            break;
        case CurveSource::delayed_autocorr:
            v = delayed_avg_autocorr(p, x);
            break;
        case CurveSource::delayed_psd:
            v = delayed_avg_psd(p, omega);
            break;
        case CurveSource::phase_shift_transform:
            v = phase_shift_psd(beta, omega);
            break;
        case CurveSource::delayed_psd_quadrature: {
            validate(p);
            require_positive_beta(beta, "delayed_psd_quadrature");
            QuadratureOptions opts;
            opts.breakpoints = {delta};
            v = psd_by_quadrature([&](double t) { return delayed_avg_autocorr(p, t); }, omega, pi * beta, opts);
            break;
        }
        case CurveSource::half_variance_transform:
            v = half_variance_psd(beta, omega);
            break;
        }
        curve.values.push_back(v);
    }
    return curve;
}

} // namespace pnavg

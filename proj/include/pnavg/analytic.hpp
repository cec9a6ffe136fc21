#pragma once

// Closed-form statistics of Wiener phase noise and of the averaged processes,
// plus a numeric Fourier-transform oracle used to cross-check them.
//
// PSD convention: two-sided, angular-frequency argument,
//   S(ω) = ∫ R(τ) e^{-jωτ} dτ,
// so that ∫ S(2πf) df = R(0). Values are in 1/Hz.

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace pnavg {

// exp(-πβ|τ|)
double phase_shift_autocorr(double beta, double tau);

// πβ / ((πβ/2)^2 + ω^2), the Lorentzian in its commonly printed form. This is
// the transform of exp(-πβ|τ|/2), i.e. of a Wiener process with half the
// diffusion rate; phase_shift_psd is the transform of phase_shift_autocorr.
double lorentzian_psd(double beta, double omega);

// 2πβ / ((πβ)^2 + ω^2)
double phase_shift_psd(double beta, double omega);

// Transform of exp(-πβ|τ|/2): the spectrum after averaging two independent
// oscillators. Numerically identical to lorentzian_psd.
double half_variance_psd(double beta, double omega);

// E[(θ_t1 - θ_0)(θ_t2 - θ_0)] = 2πβ min(t1, t2)
double wiener_autocov(double beta, double t1, double t2);

// Same quantity for the mean of two independent paths: πβ min(t1, t2).
double averaged_autocorr(double beta, double t1, double t2);

// Density of the mean of two independent uniforms on [-f_o, f_o]
// (triangular, peak 1/f_o). x is measured from the nominal carrier.
double bates2_pdf(double f_o, double x);
double bates2_cdf(double f_o, double x);
inline double bates2_variance(double f_o) { return f_o * f_o / 6.0; }

// Oscillator averaged with a copy of itself delayed by delta seconds.
struct DelayedAvgParams {
    double beta = 0.0;
    double delta = 0.0;
};
void validate(const DelayedAvgParams& p);

// exp(-πβ|τ|/2) for |τ| < δ, exp(-πβ(|τ| - δ/2)) otherwise.
double delayed_avg_autocorr(const DelayedAvgParams& p, double tau);

// Closed-form transform of delayed_avg_autocorr. Its oscillating terms have
// period 2π/δ in ω, which produces notches every 1/δ Hz.
double delayed_avg_psd(const DelayedAvgParams& p, double omega);

struct QuadratureOptions {
    // Kinks of the autocorrelation for τ > 0; mirrored to τ < 0 automatically.
    std::vector<double> breakpoints;
    // Tail bound: for |τ| beyond the last breakpoint b,
    //   |R(τ)| <= |R(b)| exp(-tail_rate (|τ| - b)).
    // The integration limit T is placed so the discarded tail is below
    // tail_tolerance times the envelope integral over [b, ∞).
    double tail_tolerance = 1e-12;
    // Relative tolerance and bisection depth of each Gauss-Kronrod chunk.
    double tolerance = 1e-10;
    unsigned max_depth = 6;
};

struct QuadratureResult {
    double real = 0.0;
    double imag = 0.0;
    double limit = 0.0; // integration limit T
    double error_estimate = 0.0;
};

// Numeric ∫_{-T}^{T} R(τ) e^{-jωτ} dτ, split at 0 and at ±breakpoints.
QuadratureResult fourier_quadrature(const std::function<double(double)>& autocorr, double omega,
                                    double tail_rate, const QuadratureOptions& options = {});
double psd_by_quadrature(const std::function<double(double)>& autocorr, double omega, double tail_rate,
                         const QuadratureOptions& options = {});

// 10 log10(psd). Throws DomainError for psd <= 0.
double to_dbc_hz(double psd_linear);

enum class CurveSource {
    phase_shift_autocorr,     // exp(-πβ|τ|)
    lorentzian,               // printed Lorentzian
    delayed_autocorr,         // piecewise delayed-average autocorrelation
    delayed_psd,              // its closed-form spectrum
    phase_shift_transform,    // transform of exp(-πβ|τ|)
    delayed_psd_quadrature,   // numeric transform of delayed_autocorr
    half_variance_transform,  // transform of exp(-πβ|τ|/2)
};
std::string_view source_name(CurveSource s);

enum class CurveAxis { lag_seconds, frequency_hz };

struct AnalyticCurve {
    CurveAxis axis = CurveAxis::frequency_hz;
    CurveSource source = CurveSource::phase_shift_transform;
    std::vector<double> grid;
    std::vector<double> values;
};

// Evaluates a source on a grid. Frequency-axis curves take Hz and convert to
// ω = 2πf internally. delta is only read by the delayed sources.
AnalyticCurve analytic_curve(CurveSource source, double beta, double delta, std::span<const double> grid);

} // namespace pnavg

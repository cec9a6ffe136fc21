#pragma once

#include "pnavg/rng.hpp"

#include <complex>
#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

namespace pnavg {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

using cplx = std::complex<double>;

// Frequency-offset distributions, all in Hz and centered on the nominal carrier.
struct DeltaOffset {
    double value = 0.0;
};
struct UniformOffset {
    double half_width = 0.0; // f_o: draws are uniform on [-f_o, f_o]
};
struct NormalOffset {
    double sigma = 0.0;
};
using OffsetDistribution = std::variant<DeltaOffset, UniformOffset, NormalOffset>;

void validate(const OffsetDistribution& dist);
double offset_variance(const OffsetDistribution& dist);

// Parameters of one free-running oscillator cos(2π(f_c + f_i)t + θ_t).
class OscillatorSpec {
public:
    OscillatorSpec(double carrier_hz, OffsetDistribution offset, double beta_hz, double theta0);

    double carrier() const noexcept { return carrier_; }
    const OffsetDistribution& offset() const noexcept { return offset_; }
    double beta() const noexcept { return beta_; }
    // Wrapped to [0, 2π).
    double theta0() const noexcept { return theta0_; }

private:
    double carrier_;
    OffsetDistribution offset_;
    double beta_;
    double theta0_;
};

// One realization of an oscillator's phase process, sampled every dt seconds.
// Samples are stored unwrapped; wrapping only happens inside cos()/exp().
struct PhasePath {
    double dt = 1.0;
    std::vector<double> samples;
    SeedId seed;

    std::size_t size() const noexcept { return samples.size(); }
    double duration() const noexcept { return dt * static_cast<double>(samples.size()); }
};

// Uniformly sampled real signal.
struct Waveform {
    double fs = 1.0;
    std::vector<double> samples;
    double t0 = 0.0;

    std::size_t size() const noexcept { return samples.size(); }
};

// Wraps an angle to [0, 2π).
double wrap_phase(double theta) noexcept;

} // namespace pnavg

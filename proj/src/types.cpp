#include "pnavg/types.hpp"

#include "pnavg/error.hpp"

#include <cmath>
#include <string>

namespace pnavg {

namespace {

void require_finite_nonneg(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0)
        throw ParameterError(std::string(what) + " must be finite and non-negative");
}

} // namespace

void validate(const OffsetDistribution& dist) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, DeltaOffset>) {
                if (!std::isfinite(d.value))
                    throw ParameterError("delta offset must be finite");
            } else if constexpr (std::is_same_v<T, UniformOffset>) {
                require_finite_nonneg(d.half_width, "uniform offset half-width");
            } else {
                require_finite_nonneg(d.sigma, "normal offset sigma");
            }
        },
        dist);
}

double offset_variance(const OffsetDistribution& dist) {
    validate(dist);
    if (const auto* u = std::get_if<UniformOffset>(&dist))
        return u->half_width * u->half_width / 3.0;
    if (const auto* n = std::get_if<NormalOffset>(&dist))
        return n->sigma * n->sigma;
    return 0.0;
}

double wrap_phase(double theta) noexcept {
    double w = std::fmod(theta, two_pi);
    if (w < 0.0)
        w += two_pi;
    if (w >= two_pi)
        w = 0.0;
    return w;
}

OscillatorSpec::OscillatorSpec(double carrier_hz, OffsetDistribution offset, double beta_hz, double theta0)
    : carrier_(carrier_hz), offset_(offset), beta_(beta_hz), theta0_(0.0) {
    if (!std::isfinite(carrier_hz) || carrier_hz <= 0.0)
        throw ParameterError("carrier frequency must be positive");
    require_finite_nonneg(beta_hz, "beta");
    if (!std::isfinite(theta0))
        throw ParameterError("initial phase must be finite");
    validate(offset_);
    theta0_ = wrap_phase(theta0);
}

} // namespace pnavg

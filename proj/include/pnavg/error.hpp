#pragma once

#include <stdexcept>
#include <string>

namespace pnavg {

// Base for every error raised by the library. Callers that do not care about
// the category can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid numeric parameter (negative rate, non-finite value, bad count).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Requested sample rate is too low for the signal content.
class SamplingError : public Error {
public:
    SamplingError(const std::string& what, double required_rate)
        : Error(what), required_rate_(required_rate) {}

    double required_rate() const noexcept { return required_rate_; }

private:
    double required_rate_;
};

// Mismatched lengths, rates or ensemble layouts.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Index or lag outside the valid range of a sequence.
class RangeError : public Error {
public:
    using Error::Error;
};

// Argument outside a function's mathematical domain (e.g. log of zero).
class DomainError : public Error {
public:
    using Error::Error;
};

// Closed form is undefined for the given parameters (e.g. zero linewidth PSD).
class DegenerateModelError : public Error {
public:
    using Error::Error;
};

// Integrand envelope does not decay fast enough to truncate the integral.
class TruncationError : public Error {
public:
    using Error::Error;
};

// Inconsistent circuit or experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pnavg

#pragma once

#include <stdexcept>
#include <string>

namespace geonorm {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// An angle input was not a finite real number.
class InvalidAngle : public Error {
public:
    using Error::Error;
};

// A numeric argument was outside the domain of the requested operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// The requested value cannot be computed to the advertised accuracy
// in double precision (overflow region, order cap exceeded, ...).
class AccuracyLoss : public Error {
public:
    using Error::Error;
};

// An iterative routine failed to reach its tolerance.  Carries the best
// estimate available when the iteration budget ran out.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& msg, double best)
        : Error(msg), best_estimate(best) {}
    double best_estimate;
};

// The sample resultant has no usable direction (e.g. perfectly balanced
// angles), so a mean direction cannot be estimated.
class DirectionUndefined : public Error {
public:
    using Error::Error;
};

// The sample is too concentrated (all points effectively identical) for
// the requested estimator.
class DegenerateSample : public Error {
public:
    using Error::Error;
};

// An operation that needs observations received none.
class EmptySample : public Error {
public:
    using Error::Error;
};

// The sample dispersion is at or above the flat-distribution limit, so no
// finite concentration parameter reproduces it.
class GammaNotIdentifiable : public Error {
public:
    using Error::Error;
};

} // namespace geonorm

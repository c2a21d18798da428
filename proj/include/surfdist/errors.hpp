#pragma once

#include <stdexcept>
#include <string>

namespace surfdist {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller violated an operation precondition (wrong surface, zero vector, ...).
struct UsageError : Error {
    using Error::Error;
};

// A geodesic left the surface domain (slit plane, cone apex). Carries the
// arclength at which the domain boundary was hit.
struct DomainExit : Error {
    DomainExit(const std::string& what, double exit_param)
        : Error(what), exit_param(exit_param) {}
    double exit_param;
};

// Footpoint uniqueness failed where a positive-reach hypothesis required it.
struct ReachViolation : Error {
    using Error::Error;
};

// Not enough samples to produce the requested statistic.
struct InsufficientData : Error {
    using Error::Error;
};

// An input trace or curve failed a stated precondition (non-Lipschitz,
// interior critical point, ...).
struct PreconditionViolation : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace surfdist

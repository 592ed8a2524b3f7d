#pragma once

#include <stdexcept>
#include <string>

namespace nskq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A field contains NaN/Inf coefficients or violates a structural invariant.
struct InvalidFieldError : Error {
    using Error::Error;
};

/// Two fields (or a field and an operation) disagree on the lattice.
struct LatticeMismatchError : Error {
    using Error::Error;
};

/// An exponential weight overflowed at the lattice edge.
struct SaturationError : Error {
    using Error::Error;
};

/// Model parameters violate the standing positivity/decay hypotheses.
struct ModelParameterError : Error {
    using Error::Error;
};

/// A quadrature failed to reach its tolerance, or its hypotheses fail
/// (e.g. a divergent Riesz integral).
struct QuadratureError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace nskq

#pragma once

#include <stdexcept>
#include <string>

namespace miracah {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input (rationals, config files, index lists).
struct ParseError : Error {
  using Error::Error;
};

// Parameter set outside the admissible region, or an operation that
// requires a validated set received an unvalidated one.
struct RangeError : Error {
  using Error::Error;
};

// A denominator or Pochhammer factor vanished where a formula needs it
// to be nonzero (degenerate parameter/evaluation-point combination).
struct DegenerateError : Error {
  using Error::Error;
};

// A quantity that must keep a definite sign on a scan range failed to.
struct SignError : Error {
  using Error::Error;
};

// Interpolation hold-out residual nonzero: sampled values are not a
// polynomial of the declared degree in the declared variable.
struct PolynomialFitError : Error {
  using Error::Error;
};

// Requested operation is outside what this library supports
// (e.g. nested zero-index reduction, non-representable q-exponents).
struct UnsupportedError : Error {
  using Error::Error;
};

}  // namespace miracah

#pragma once

#include <stdexcept>
#include <string>

namespace echoverse {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched shapes, index ranges, or lengths.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A domain invariant was violated (orbit bounds, refractory gaps,
/// state physicality, malformed fading functions).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Diverging recurrences or otherwise non-recoverable numerics.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Unparseable or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace echoverse

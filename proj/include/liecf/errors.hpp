#pragma once

#include <stdexcept>
#include <string>

namespace liecf {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension/shape mismatch (non-square input, incompatible product, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerically rank-deficient input where full rank is required.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Name not found in a registry or on disk.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A Butcher tableau that admits no two-register (2N) representation.
class NotTwoNRepresentableError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or malformed configuration data (schemes, tensors, files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Too few admissible data points to perform a fit.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state. Carries the time stamp of the
/// first step whose result was non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t_fail)
      : Error(what), t_fail_(t_fail) {}
  double time_of_failure() const { return t_fail_; }

 private:
  double t_fail_;
};

}  // namespace liecf

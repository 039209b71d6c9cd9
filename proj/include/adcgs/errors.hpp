#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adcgs {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller
/// (length mismatch, infeasible input, non-positive parameter, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A run produced a non-finite value or an internally inconsistent quantity.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Power iteration (or a similar estimator) did not converge.
class EstimationError : public NumericalError {
 public:
  EstimationError(const std::string& what, double best_estimate)
      : NumericalError(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

/// The first-iteration line search exhausted its trial budget.
class LineSearchFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The requested operation is not available for this object (e.g. projection
/// onto the K-sparse polytope).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration detected before any iteration ran.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace adcgs

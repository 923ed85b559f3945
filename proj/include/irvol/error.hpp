#ifndef IRVOL_ERROR_HPP
#define IRVOL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace irvol {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad model parameters (|phi| >= 1, nonpositive scale, infeasible GARCH coefficients, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input outside an operation's domain (nonpositive price, empty series, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class OrderingError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ZeroGapError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Non positive-definite or otherwise unusable matrix.
class MatrixError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Optimizer or sampler could not produce a usable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents; carries the offending line when known.
class FormatError : public IoError {
 public:
  FormatError(const std::string& what, long line = -1)
      : IoError(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace irvol

#endif  // IRVOL_ERROR_HPP

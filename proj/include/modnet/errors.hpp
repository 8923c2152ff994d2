#pragma once

#include <stdexcept>
#include <string>

namespace modnet {

// Base of every error thrown by the library. The CLI maps each subclass onto
// a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or precondition violation (empty dataset, C == 0, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Vector or matrix dimensions disagree with the network or graph.
class ShapeError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Invalid configuration value (range check failed, unknown key, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Arithmetic that cannot be carried out (log 0 with nonzero weight, zero
// normalizer, constant series, ...).
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateRangeError : public NumericDomainError {
 public:
  using NumericDomainError::NumericDomainError;
};

class UndefinedCorrelationError : public NumericDomainError {
 public:
  using NumericDomainError::NumericDomainError;
};

// Training produced a non-finite or exploding parameter.
class DivergenceError : public NumericDomainError {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : NumericDomainError(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

// A layer lost every unit during isolated-unit removal.
class EmptyLayerError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// File was readable but malformed, truncated or of the wrong version.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace modnet

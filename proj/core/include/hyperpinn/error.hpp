#pragma once

#include <stdexcept>
#include <string>

namespace hyperpinn {

// Base of every error raised by the library. Subclasses name the failure;
// the message carries the detail (offending index, key, value).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors that indicate a numerical breakdown rather than bad input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvertedState : public NumericalError {
 public:
  InvertedState(const std::string& what, long point_index = -1)
      : NumericalError(what), point_index_(point_index) {}
  long point_index() const noexcept { return point_index_; }

 private:
  long point_index_;
};

class NonFiniteLoss : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonFiniteObjective : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LineSearchFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotDescentDirection : public LineSearchFailure {
 public:
  using LineSearchFailure::LineSearchFailure;
};

class MaxProbesExceeded : public LineSearchFailure {
 public:
  using LineSearchFailure::LineSearchFailure;
};

class NoBracket : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyTape : public Error {
 public:
  using Error::Error;
};

class EvenCount : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public Error {
 public:
  using Error::Error;
};

class MissingNormal : public Error {
 public:
  using Error::Error;
};

class ZeroReference : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperpinn

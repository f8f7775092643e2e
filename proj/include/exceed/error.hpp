#pragma once

#include <stdexcept>
#include <string>

namespace exceed {

/// Invalid parameters, configuration or arguments. The CLI maps these to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure of a numerical procedure (root finding, quadrature, embedding).
/// The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmbeddingNotPSD : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoBracket : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LengthMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class OutOfRange : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace exceed

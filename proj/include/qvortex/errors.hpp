#pragma once

#include <stdexcept>
#include <string>

namespace qvortex {

/// Bad parameters or configuration supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidParams : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Evaluation requested outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures of a numerical procedure on valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RootFindError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Memory-kernel spread tau(t) = int nu + sigma^2 is not positive.
class NonpositiveSpread : public NumericalError {
 public:
  NonpositiveSpread(double t, double tau)
      : NumericalError("nonpositive spread tau(" + std::to_string(t) +
                       ") = " + std::to_string(tau)),
        time(t),
        spread(tau) {}
  double time;
  double spread;
};

class StepTooLarge : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The wave function is below the nodal threshold at a guidance evaluation.
class NodalRegion : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonpositiveDensity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qvortex

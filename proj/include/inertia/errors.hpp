#pragma once

#include <stdexcept>
#include <string>

namespace inertia {

/// Argument outside the mathematical domain of an operation (e.g. t < 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation point outside a tabulated range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid construction or configuration parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration that is well formed but violates a theorem hypothesis.
class HypothesisError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Vector or matrix dimensions that do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nonfinite values or an algorithm that did not converge.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace inertia

#pragma once

#include <stdexcept>
#include <string>

namespace qmupl {

/// Invalid numeric input (non-positive mass, dt <= 0, misaligned grids, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A precondition on the physical state does not hold (e.g. a.real <= 0).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical failure detected at run time: lost containment, vanishing norm,
/// a violated pathwise bound.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wave function reached the edges of the periodic grid.
class ContainmentError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Scenario or schema problem in a configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmupl

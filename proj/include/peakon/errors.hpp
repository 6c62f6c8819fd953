#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peakon {

/// Argument outside the mathematical domain of an operation (non-finite
/// input, non-decaying source, non-symmetric matrix, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A PeakonState that violates positivity or ordering.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter outside the range where a construction is defined (e.g. K < 4).
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton iteration for the orthogonality shifts did not converge.
class ModulationFailure : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integrator could not advance without two neighbouring peakons
/// approaching closer than the gap guard.
class NearCollisionError : public std::runtime_error {
 public:
  NearCollisionError(std::size_t left_index, double time, const std::string& what)
      : std::runtime_error(what), left_(left_index), time_(time) {}

  /// Index i of the offending pair (i, i+1), zero based.
  std::size_t left_index() const noexcept { return left_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t left_;
  double time_;
};

}  // namespace peakon

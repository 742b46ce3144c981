#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace omsq {

/// Malformed or physically inconsistent input (bad config key, negative decay, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar function was called outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures of the numerical machinery itself.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, std::vector<double> residual_history)
      : NumericalError(what), history_(std::move(residual_history)) {}

  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

class SingularDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystem : public NumericalError {
 public:
  SingularSystem(const std::string& what, double omega) : NumericalError(what), omega_(omega) {}

  /// Frequency (in the matrix unit) at which the resolvent was singular.
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

}  // namespace omsq

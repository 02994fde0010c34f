#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gvi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid system or integrator configuration (singular mass, bad step, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// An optional capability (e.g. the potential Hessian) was required but absent.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A caller-side precondition was violated.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A nonlinear or complementarity solve failed to reach its tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// No active set satisfies the complementarity conditions.
class InfeasibleError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// An iterative procedure exceeded its iteration cap. Carries the last iterate.
class NonterminationError : public SolverError {
 public:
  NonterminationError(const std::string& what, Eigen::VectorXd last)
      : SolverError(what), last_iterate_(std::move(last)) {}

  const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }

 private:
  Eigen::VectorXd last_iterate_;
};

/// A time step could not be completed; the message carries the diagnostic state.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double t) : Error(what), time_(t) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace gvi

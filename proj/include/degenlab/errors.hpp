#pragma once

#include <stdexcept>
#include <string>

namespace degenlab {

/// Argument outside the mathematical domain of an operation (d <= 0, beta >= 1, point outside the domain).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Point on the medial axis, where d is not differentiable.
class NonSmoothPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid run or discretization parameters.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke a documented precondition on its inputs.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite-difference stencil leaves the region where the function is defined.
class StencilError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class CertificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace degenlab

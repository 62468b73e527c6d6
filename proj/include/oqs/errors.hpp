#pragma once

#include <stdexcept>
#include <string>

namespace oqs {

// Caller broke a documented precondition.
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

struct IterationError : std::runtime_error {
  double best_residual;
  IterationError(const std::string& what, double residual)
      : std::runtime_error(what), best_residual(residual) {}
};

struct NonUniqueSteadyState : std::runtime_error {
  int null_dim;  // -1 when only known to exceed one
  NonUniqueSteadyState(const std::string& what, int dim)
      : std::runtime_error(what), null_dim(dim) {}
};

struct StiffnessError : std::runtime_error {
  double t, h;
  StiffnessError(const std::string& what, double at, double step)
      : std::runtime_error(what), t(at), h(step) {}
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace oqs

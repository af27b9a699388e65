#pragma once

#include <stdexcept>
#include <string>

namespace bellpoly {

// Argument outside the region where a closed form or construction is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Request that would exceed the brute-force size limits.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The interior-point solver stopped before reaching the requested accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double primal_residual,
                   double dual_residual, double gap)
      : std::runtime_error(what),
        primal_residual_(primal_residual),
        dual_residual_(dual_residual),
        gap_(gap) {}

  double primal_residual() const noexcept { return primal_residual_; }
  double dual_residual() const noexcept { return dual_residual_; }
  double gap() const noexcept { return gap_; }

 private:
  double primal_residual_;
  double dual_residual_;
  double gap_;
};

}  // namespace bellpoly

#pragma once

#include <stdexcept>
#include <string>

namespace fhhg {

/// Invalid input: a parameter, grid or configuration value outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure (root search, continued fraction, window, integrator)
/// did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fhhg

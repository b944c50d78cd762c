#pragma once

#include <complex>

#include "fhhg/model.hpp"

namespace fhhg {

/// Weak-coupling quasi-energy of the dressed excited state:
///
///   z ~ epsilon_d + lambda^2 sum_n Sigma^(n)(epsilon_d + i0) J_n(A/omega)^2
///
/// with every Sigma^(n) taken as its boundary value from the upper half plane.
/// The sum runs over n in [-window, window]. Throws DomainError if some
/// epsilon_d - n omega hits a branch point.
std::complex<double> perturbative_eigenvalue(const ModelParams& params, int window = 32);

}  // namespace fhhg

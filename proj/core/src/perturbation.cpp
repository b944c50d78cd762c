#include "fhhg/perturbation.hpp"

#include "fhhg/bessel.hpp"
#include "fhhg/errors.hpp"
#include "fhhg/self_energy.hpp"

namespace fhhg {

std::complex<double> perturbative_eigenvalue(const ModelParams& params, int window) {
  if (window < 0) throw DomainError("perturbation window must be non-negative");
  if (params.lambda == 0.0) return {params.epsilon_d, 0.0};

  const auto weights = bessel_weights(params.drive_ratio(), window);
  cplx shift{0.0, 0.0};
  for (int n = -window; n <= window; ++n) {
    const double energy = params.epsilon_d - n * params.omega;
    // Branch points are checked for every windowed channel, even when the
    // Bessel weight underflows.
    const cplx boundary = sigma_boundary(energy, params.k_c);
    shift += boundary * weights[n];
  }
  return params.epsilon_d + params.lambda * params.lambda * shift;
}

}  // namespace fhhg

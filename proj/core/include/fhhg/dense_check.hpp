#pragma once

#include <complex>
#include <vector>

#include "fhhg/floquet_solver.hpp"

namespace fhhg {

/// Off-diagonal convention of the drive block. The two are related by the
/// diagonal similarity d_n -> i^n d_n and share one spectrum.
enum class DriveGauge { antisymmetric, symmetric };

/// Row-major (2 truncation + 1)^2 folded P-block with the self-energies
/// frozen at `z_fixed`.
std::vector<cplx> dense_effective_matrix(const ModelParams& params, cplx z_fixed, int truncation,
                                         DriveGauge gauge = DriveGauge::antisymmetric);

/// All eigenvalues of dense_effective_matrix.
std::vector<cplx> dense_spectrum(const ModelParams& params, cplx z_fixed, int truncation,
                                 DriveGauge gauge = DriveGauge::antisymmetric);

struct DenseCheckReport {
  cplx dense_eigenvalue;      // eigenvalue of the truncated matrix nearest epsilon_d
  cplx fraction_eigenvalue;   // root of the frozen-argument continued fraction
  double eigenvalue_difference = 0.0;
  double cosine_distance = 0.0;  // 1 - |<dense, fraction>| / (|dense| |fraction|)
  int truncation = 0;
};

/// Cross-checks the continued-fraction machinery against dense linear algebra.
/// Requires truncation >= 4.
DenseCheckReport dense_truncated_check(const ModelParams& params, cplx z_fixed, int truncation,
                                       const SolverOptions& options = {});

}  // namespace fhhg

#include "fhhg/dense_check.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fhhg/errors.hpp"

namespace fhhg {

namespace {

using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

Matrix build(const ModelParams& params, cplx z_fixed, int truncation, DriveGauge gauge) {
  const EffectiveDiagonal diagonal(params, SheetSelector(params, z_fixed), z_fixed);
  const int size = 2 * truncation + 1;
  Matrix h = Matrix::Zero(size, size);
  const cplx above = gauge == DriveGauge::antisymmetric ? diagonal.coupling_up()
                                                        : cplx(0.5 * params.A, 0.0);
  const cplx below = gauge == DriveGauge::antisymmetric ? -above : above;
  for (int i = 0; i < size; ++i) {
    h(i, i) = diagonal.value(i - truncation, z_fixed);
    if (i + 1 < size) {
      h(i, i + 1) = above;
      h(i + 1, i) = below;
    }
  }
  return h;
}

void require_truncation(int truncation) {
  if (truncation < 4) throw DomainError("dense truncation must be at least 4");
}

}  // namespace

std::vector<cplx> dense_effective_matrix(const ModelParams& params, cplx z_fixed, int truncation,
                                         DriveGauge gauge) {
  require_truncation(truncation);
  const Matrix h = build(params, z_fixed, truncation, gauge);
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(h.size()));
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) out.push_back(h(i, j));
  return out;
}

std::vector<cplx> dense_spectrum(const ModelParams& params, cplx z_fixed, int truncation,
                                 DriveGauge gauge) {
  require_truncation(truncation);
  Eigen::ComplexEigenSolver<Matrix> solver(build(params, z_fixed, truncation, gauge), false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

DenseCheckReport dense_truncated_check(const ModelParams& params, cplx z_fixed, int truncation,
                                       const SolverOptions& options) {
  require_truncation(truncation);
  Eigen::ComplexEigenSolver<Matrix> solver(
      build(params, z_fixed, truncation, DriveGauge::antisymmetric), true);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");

  Eigen::Index nearest = 0;
  const auto& values = solver.eigenvalues();
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (std::abs(values(i) - params.epsilon_d) < std::abs(values(nearest) - params.epsilon_d)) {
      nearest = i;
    }
  }

  // Frozen-argument continued fraction: a linear problem solved by the same
  // Newton/fraction code as the resonance search.
  const EffectiveDiagonal frozen(params, SheetSelector(params, z_fixed), z_fixed);
  cplx z = values(nearest);
  for (int it = 0; it < options.max_iterations; ++it) {
    const auto d = dispersion(frozen, z, options);
    if (std::abs(d.value) < options.tolerance) break;
    z -= d.value / d.derivative;
  }

  SolverOptions window_options = options;
  window_options.window = truncation;
  window_options.min_depth = std::max(options.min_depth, truncation);
  window_options.edge_decay = 1.0;  // the dense matrix is truncated anyway
  const auto coefficients = right_coefficients(frozen, z, window_options);

  const auto vector = solver.eigenvectors().col(nearest);
  cplx overlap{0.0, 0.0};
  double norm_dense = 0.0;
  double norm_fraction = 0.0;
  for (int n = -truncation; n <= truncation; ++n) {
    const cplx a = vector(n + truncation);
    const cplx b = coefficients[n];
    overlap += std::conj(a) * b;
    norm_dense += std::norm(a);
    norm_fraction += std::norm(b);
  }

  DenseCheckReport report;
  report.dense_eigenvalue = values(nearest);
  report.fraction_eigenvalue = z;
  report.eigenvalue_difference = std::abs(values(nearest) - z);
  report.cosine_distance = 1.0 - std::abs(overlap) / std::sqrt(norm_dense * norm_fraction);
  report.truncation = truncation;
  return report;
}

}  // namespace fhhg

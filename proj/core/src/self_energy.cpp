#include "fhhg/self_energy.hpp"

#include <cmath>
#include <numbers>

#include "fhhg/errors.hpp"

namespace fhhg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBranchTolerance = 1e-14;

void check_branch_points(cplx zeta, double k_c) {
  if (std::abs(zeta) <= kBranchTolerance * k_c ||
      std::abs(zeta - k_c) <= kBranchTolerance * k_c) {
    throw DomainError("self-energy evaluated at a branch point (zeta in {0, k_c})");
  }
}

void check_second_sheet(cplx zeta, double k_c) {
  if (!(zeta.real() > 0.0 && zeta.real() < k_c)) {
    throw DomainError("second-sheet self-energy requested outside the continuation region");
  }
}

// Log zeta - Log(zeta - k_c), principal branches; the cuts of the two terms
// cancel on the negative axis, leaving only [0, k_c].
cplx log_ratio(cplx zeta, double k_c) {
  return std::log(zeta) - std::log(zeta - k_c);
}

}  // namespace

double spectral_density(double energy, double k_c) {
  return (energy > 0.0 && energy < k_c) ? 4.0 * energy : 0.0;
}

cplx sigma_shifted(cplx zeta, double k_c, Sheet sheet) {
  check_branch_points(zeta, k_c);
  cplx value = 4.0 * (-k_c + zeta * log_ratio(zeta, k_c));
  if (sheet == Sheet::second) {
    check_second_sheet(zeta, k_c);
    value -= cplx(0.0, 8.0 * kPi) * zeta;
  }
  return value;
}

cplx sigma_shifted_prime(cplx zeta, double k_c, Sheet sheet) {
  check_branch_points(zeta, k_c);
  cplx value = 4.0 * (log_ratio(zeta, k_c) - k_c / (zeta - k_c));
  if (sheet == Sheet::second) {
    check_second_sheet(zeta, k_c);
    value -= cplx(0.0, 8.0 * kPi);
  }
  return value;
}

cplx sigma(const ModelParams& params, int n, cplx z, Sheet sheet) {
  return sigma_shifted(z - n * params.omega, params.k_c, sheet);
}

cplx sigma_prime(const ModelParams& params, int n, cplx z, Sheet sheet) {
  return sigma_shifted_prime(z - n * params.omega, params.k_c, sheet);
}

cplx sigma_boundary(double energy, double k_c) {
  check_branch_points(cplx(energy, 0.0), k_c);
  const double principal =
      4.0 * (-k_c + energy * std::log(std::abs(energy) / std::abs(energy - k_c)));
  return {principal, -kPi * spectral_density(energy, k_c)};
}

Sheet select_sheet(const ModelParams& params, int n, cplx z) {
  const double shifted = z.real() - n * params.omega;
  return (z.imag() < 0.0 && shifted > 0.0 && shifted < params.k_c) ? Sheet::second
                                                                     : Sheet::first;
}

Sheet SheetSelector::operator()(int n) const {
  const double shifted = reference_.real() - n * omega_;
  return (reference_.imag() < 0.0 && shifted > 0.0 && shifted < k_c_) ? Sheet::second
                                                                        : Sheet::first;
}

bool SheetSelector::same_classification(const SheetSelector& other,
                                        ChannelWindow window) const {
  for (int n = window.lo; n <= window.hi; ++n) {
    if ((*this)(n) != other(n)) return false;
  }
  return true;
}

}  // namespace fhhg

#pragma once

#include <complex>

#include "fhhg/model.hpp"

namespace fhhg {

using cplx = std::complex<double>;

/// Riemann sheet of the channel self-energy. The first sheet is the physical
/// one (cut on [0, k_c]); the second is its continuation through the cut from
/// above, where the resonance poles live.
enum class Sheet { first, second };

/// Coupling density rho(e) = 4e on (0, k_c), zero elsewhere (both endpoints
/// included in "elsewhere").
double spectral_density(double energy, double k_c);

/// Self-energy of one channel as a function of the shifted argument
/// zeta = z - n*omega:
///
///   Sigma_I(zeta)  = 4 [ -k_c + zeta (Log zeta - Log(zeta - k_c)) ]
///   Sigma_II(zeta) = Sigma_I(zeta) - 8 pi i zeta
///
/// Throws DomainError at the branch points zeta in {0, k_c}, and for the
/// second sheet when Re zeta lies outside (0, k_c).
cplx sigma_shifted(cplx zeta, double k_c, Sheet sheet);
cplx sigma_shifted_prime(cplx zeta, double k_c, Sheet sheet);

/// Sigma^(n)(z) = Sigma(z - n omega) on the requested sheet.
cplx sigma(const ModelParams& params, int n, cplx z, Sheet sheet);
cplx sigma_prime(const ModelParams& params, int n, cplx z, Sheet sheet);

/// Boundary value Sigma(E + i0) on the real axis: principal value minus
/// i pi rho(E). Throws at the branch points.
cplx sigma_boundary(double energy, double k_c);

/// Second sheet iff Im z < 0 and Re z - n omega lies in (0, k_c).
Sheet select_sheet(const ModelParams& params, int n, cplx z);

/// Per-channel sheet assignment frozen from a reference point (normally the
/// root-search seed or the converged pole).
class SheetSelector {
 public:
  SheetSelector() = default;
  SheetSelector(const ModelParams& params, cplx reference)
      : omega_(params.omega), k_c_(params.k_c), reference_(reference) {}

  /// Every channel on the first sheet.
  static SheetSelector first_only() { return SheetSelector(); }

  Sheet operator()(int n) const;
  cplx reference() const { return reference_; }
  bool same_classification(const SheetSelector& other, ChannelWindow window) const;

 private:
  double omega_ = 1.0;
  double k_c_ = kTwoPi;
  cplx reference_{0.0, 0.0};  // real reference => every channel on sheet I
};

}  // namespace fhhg

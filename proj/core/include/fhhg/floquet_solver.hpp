#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "fhhg/model.hpp"
#include "fhhg/self_energy.hpp"

namespace fhhg {

enum class FoldDirection { up, down };
enum class SeedPolicy { perturbative, user };
enum class SheetPolicy { automatic, first_only };

struct SolverOptions {
  int window = 32;                     // coefficients kept for n in [-window, window]
  int min_depth = 64;                  // starting continued-fraction depth
  int max_depth = 1 << 14;
  double tolerance = 1e-12;            // on |D(z)|
  double fraction_tolerance = 1e-13;   // depth-doubling acceptance for C_up/C_down
  int max_iterations = 100;
  SeedPolicy seed_policy = SeedPolicy::perturbative;
  cplx user_seed{0.0, 0.0};
  SheetPolicy sheet_policy = SheetPolicy::automatic;
  int perturbation_window = 32;
  double edge_decay = 1e-10;           // max |R^(+-window)| / |R^(0)|

  /// Throws DomainError naming the offending field.
  void validate() const;

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

/// Diagonal of the folded P-block, epsilon_d + n omega + lambda^2 Sigma^(n)(z).
///
/// With a frozen argument the self-energies are evaluated at that fixed point
/// instead of at z, which turns the nonlinear problem into an ordinary
/// tridiagonal eigenproblem (used for dense cross-checks).
class EffectiveDiagonal {
 public:
  EffectiveDiagonal(const ModelParams& params, SheetSelector sheets,
                    std::optional<cplx> frozen_argument = std::nullopt)
      : params_(params), sheets_(sheets), frozen_(frozen_argument) {}

  cplx value(int n, cplx z) const;
  cplx derivative(int n, cplx z) const;

  /// Off-diagonal element H[n][n+1] (H[n][n-1] is its negative).
  cplx coupling_up() const { return cplx(0.0, 0.5 * params_.A); }

  const ModelParams& params() const { return params_; }
  const SheetSelector& sheets() const { return sheets_; }

 private:
  ModelParams params_;
  SheetSelector sheets_;
  std::optional<cplx> frozen_;
};

struct FractionValue {
  cplx value;
  cplx derivative;
  int depth = 0;
};

/// Influence of the Floquet blocks above (up) or below (down) row `center`,
/// folded onto that row:
///
///   C(z) = (A^2/4) / (z - d_{c+-1}(z) - (A^2/4) / (z - d_{c+-2}(z) - ...))
///
/// truncated after `depth` rows with a zero tail.
FractionValue continued_fraction(const EffectiveDiagonal& diagonal, cplx z,
                                 FoldDirection direction, int depth, int center = 0);

/// Doubles the depth from options.min_depth until two successive values
/// differ by less than options.fraction_tolerance. Throws ConvergenceError.
FractionValue continued_fraction_adaptive(const EffectiveDiagonal& diagonal, cplx z,
                                          FoldDirection direction,
                                          const SolverOptions& options, int center = 0);

struct DispersionValue {
  cplx value;
  cplx derivative;
  int depth = 0;
};

/// D(z) = z - d_c(z) - C_up(z) - C_down(z); vanishes at quasi-energy poles.
DispersionValue dispersion(const EffectiveDiagonal& diagonal, cplx z,
                           const SolverOptions& options, int center = 0);

/// Floquet coefficients on an inclusive index range.
class CoefficientMap {
 public:
  CoefficientMap() = default;
  CoefficientMap(int lo, std::vector<cplx> values) : lo_(lo), values_(std::move(values)) {}

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(values_.size()) - 1; }
  bool contains(int n) const { return n >= lo() && n <= hi(); }
  /// Zero outside the stored range.
  cplx operator[](int n) const {
    return contains(n) ? values_[static_cast<std::size_t>(n - lo_)] : cplx{};
  }
  const std::vector<cplx>& values() const { return values_; }
  cplx sum() const;
  CoefficientMap shifted(int m) const { return {lo_ + m, values_}; }

 private:
  int lo_ = 0;
  std::vector<cplx> values_;
};

/// Right eigenvector of the folded P-block at a root z: R^(0) = 1 and the
/// remaining entries from the continued-fraction ratios of
///   (A/2i) R^(n-1) + (d_n(z) - z) R^(n) - (A/2i) R^(n+1) = 0.
/// Throws ConvergenceError when the window edges have not decayed.
CoefficientMap right_coefficients(const EffectiveDiagonal& diagonal, cplx z,
                                  const SolverOptions& options);

/// Left eigenvector: the same recurrence with the off-diagonal signs flipped.
CoefficientMap left_coefficients(const EffectiveDiagonal& diagonal, cplx z,
                                 const SolverOptions& options);

/// A Floquet resonance state: pole, coefficients and biorthonormal scaling.
///
/// The full right vector is N^{1/2} sum_n R^(n) [ |d, n> + sum_k lambda V_k /
/// (z - n omega - |k|) |k, n> ] and the left vector is built the same way from
/// L^(n); `norm` is N.
struct ResonanceState {
  ModelParams params;
  cplx z{0.0, 0.0};
  int mode = 0;
  CoefficientMap right;
  CoefficientMap left;
  cplx norm{1.0, 0.0};
  cplx emission{0.0, 0.0};  // (N / 2 pi) sum_n R^(n)
  SheetSelector sheets;
  int window = 0;
  double residual = 0.0;
  int depth = 0;
  int iterations = 0;
  bool used_muller = false;

  cplx channel_energy(int n) const { return z - n * params.omega; }
  /// N sum_n L^(n): right-vector scale times the overlap of the left vector
  /// with the bare excited state.
  cplx pole_weight() const { return norm * left.sum(); }
  cplx norm_sqrt() const { return std::sqrt(norm); }
  bool channel_resonant(int n) const { return sheets(n) == Sheet::second; }
};

/// Newton iteration on D(z) from the perturbative seed, with Muller fallback.
/// Sheets are frozen from the seed and re-checked once after convergence.
/// Throws ConvergenceError on failure, a branch-point collision, or a root
/// with Im z > 1e-12.
ResonanceState solve_resonance(const ModelParams& params, const SolverOptions& options = {});

/// Fixes N so the full-space c-product of the state with its left partner is 1.
/// The continuum part of the product is -lambda^2 Sigma^(n)'(z) per channel.
ResonanceState normalize(ResonanceState state);

/// Floquet mode m: z -> z + m omega, coefficients re-indexed by m.
ResonanceState shift_mode(const ResonanceState& state, int m);

/// Full-space c-product <<left~ | right>> (no complex conjugation).
cplx c_product(const ResonanceState& left, const ResonanceState& right);

}  // namespace fhhg

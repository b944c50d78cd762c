#include "fhhg/floquet_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fhhg/errors.hpp"
#include "fhhg/perturbation.hpp"

namespace fhhg {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Ratio chain of the three-term recurrence. `below` is H[n][n-1] and `above`
// is H[n][n+1]; the right vector uses (-iA/2, iA/2), the left one the
// transpose. R^(0) = 1.
CoefficientMap coefficient_chain(const EffectiveDiagonal& diagonal, cplx z, int window,
                                 int tail_depth, cplx below, cplx above) {
  const int top = window + tail_depth;
  const cplx fold = below * above;  // A^2 / 4

  // tails[i] holds the fold of rows i+1, i+2, ... for the upward direction.
  std::vector<cplx> up_tail(static_cast<std::size_t>(top) + 2, cplx{});
  std::vector<cplx> down_tail(static_cast<std::size_t>(top) + 2, cplx{});
  for (int n = top; n >= 1; --n) {
    const cplx denom = z - diagonal.value(n, z) - up_tail[static_cast<std::size_t>(n) + 1];
    up_tail[static_cast<std::size_t>(n)] = fold == cplx{} ? cplx{} : fold / denom;
  }
  for (int n = top; n >= 1; --n) {
    const cplx denom = z - diagonal.value(-n, z) - down_tail[static_cast<std::size_t>(n) + 1];
    down_tail[static_cast<std::size_t>(n)] = fold == cplx{} ? cplx{} : fold / denom;
  }

  std::vector<cplx> values(2 * static_cast<std::size_t>(window) + 1, cplx{});
  const auto at = [&](int n) -> cplx& { return values[static_cast<std::size_t>(n + window)]; };
  at(0) = 1.0;
  for (int n = 1; n <= window; ++n) {
    const cplx denom = z - diagonal.value(n, z) - up_tail[static_cast<std::size_t>(n) + 1];
    at(n) = below == cplx{} ? cplx{} : at(n - 1) * (below / denom);
  }
  for (int n = 1; n <= window; ++n) {
    const cplx denom = z - diagonal.value(-n, z) - down_tail[static_cast<std::size_t>(n) + 1];
    at(-n) = above == cplx{} ? cplx{} : at(-n + 1) * (above / denom);
  }
  return CoefficientMap(-window, std::move(values));
}

void check_edge_decay(const CoefficientMap& map, double limit) {
  const double edge = std::max(std::abs(map[map.lo()]), std::abs(map[map.hi()]));
  const double centre = std::abs(map[0]);
  if (!(edge <= limit * centre)) {
    throw ConvergenceError("coefficient window too small: edge ratio " + std::to_string(edge / centre) +
                           " exceeds " + std::to_string(limit));
  }
}

int tail_depth_for(const EffectiveDiagonal& diagonal, cplx z, const SolverOptions& options) {
  const int up = continued_fraction_adaptive(diagonal, z, FoldDirection::up, options).depth;
  const int down = continued_fraction_adaptive(diagonal, z, FoldDirection::down, options).depth;
  return std::max(up, down);
}

struct RootResult {
  cplx z;
  double residual = 0.0;
  int depth = 0;
  int iterations = 0;
  bool used_muller = false;
};

RootResult muller(const EffectiveDiagonal& diagonal, cplx start, const SolverOptions& options,
                  int iterations_so_far) {
  const auto eval = [&](cplx z) { return dispersion(diagonal, z, options).value; };
  const double h = 1e-3 * std::max(1.0, std::abs(start));
  cplx x0 = start - h, x1 = start + cplx(0.0, -h), x2 = start;
  cplx f0 = eval(x0), f1 = eval(x1), f2 = eval(x2);
  for (int it = iterations_so_far; it < options.max_iterations; ++it) {
    const cplx q = (x2 - x1) / (x1 - x0);
    const cplx a = q * f2 - q * (1.0 + q) * f1 + q * q * f0;
    const cplx b = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0;
    const cplx c = (1.0 + q) * f2;
    const cplx root = std::sqrt(b * b - 4.0 * a * c);
    const cplx den = std::abs(b + root) > std::abs(b - root) ? b + root : b - root;
    if (den == cplx{}) break;
    const cplx x3 = x2 - (x2 - x1) * (2.0 * c / den);
    const auto d = dispersion(diagonal, x3, options);
    x0 = x1; f0 = f1;
    x1 = x2; f1 = f2;
    x2 = x3; f2 = d.value;
    if (std::abs(d.value) < options.tolerance) {
      return {x3, std::abs(d.value), d.depth, it + 1, true};
    }
  }
  throw ConvergenceError("quasi-energy search did not converge after " +
                         std::to_string(options.max_iterations) + " iterations");
}

RootResult find_root(const EffectiveDiagonal& diagonal, cplx seed, const SolverOptions& options) {
  cplx z = seed;
  auto d = dispersion(diagonal, z, options);
  int stalls = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    if (std::abs(d.value) < options.tolerance) {
      return {z, std::abs(d.value), d.depth, it, false};
    }
    if (d.derivative == cplx{} || !finite(d.derivative)) {
      return muller(diagonal, z, options, it);
    }
    cplx step = d.value / d.derivative;
    auto next_z = z - step;
    auto next = dispersion(diagonal, next_z, options);
    // Backtrack when the full Newton step increases the residual.
    for (int halving = 0; halving < 8 && std::abs(next.value) >= std::abs(d.value); ++halving) {
      step *= 0.5;
      next_z = z - step;
      next = dispersion(diagonal, next_z, options);
    }
    if (std::abs(next.value) >= std::abs(d.value)) {
      if (++stalls >= 2) return muller(diagonal, z, options, it);
    } else {
      stalls = 0;
    }
    z = next_z;
    d = next;
  }
  if (std::abs(d.value) < options.tolerance) {
    return {z, std::abs(d.value), d.depth, options.max_iterations, false};
  }
  return muller(diagonal, z, options, options.max_iterations / 2);
}

SheetSelector sheets_for(const ModelParams& params, cplx reference, const SolverOptions& options) {
  return options.sheet_policy == SheetPolicy::first_only ? SheetSelector::first_only()
                                                         : SheetSelector(params, reference);
}

// A channel threshold at exactly epsilon_d + n omega makes the real-axis
// estimate singular; nudging the level by 1e-6 omega keeps it close.
cplx perturbative_seed(const ModelParams& params, const SolverOptions& options) {
  try {
    return perturbative_eigenvalue(params, options.perturbation_window);
  } catch (const DomainError&) {
    ModelParams nudged = params;
    nudged.epsilon_d += 1e-6 * params.omega;
    return perturbative_eigenvalue(nudged, options.perturbation_window);
  }
}

}  // namespace

void SolverOptions::validate() const {
  if (window < 1) throw DomainError("solver.window must be at least 1");
  if (min_depth < window) throw DomainError("solver.depth must be at least solver.window");
  if (max_depth < min_depth) throw DomainError("solver.max_depth must be at least solver.depth");
  if (!(tolerance > 0.0)) throw DomainError("solver.tolerance must be positive");
  if (!(fraction_tolerance > 0.0)) throw DomainError("solver.fraction_tolerance must be positive");
  if (max_iterations < 1) throw DomainError("solver.max_iterations must be positive");
  if (perturbation_window < 0) throw DomainError("solver.perturbation_window must be non-negative");
  if (!(edge_decay > 0.0)) throw DomainError("solver.edge_decay must be positive");
}

cplx EffectiveDiagonal::value(int n, cplx z) const {
  const double bare = params_.epsilon_d + n * params_.omega;
  if (params_.lambda == 0.0) return bare;
  const cplx argument = frozen_.value_or(z);
  return bare + params_.lambda * params_.lambda * sigma(params_, n, argument, sheets_(n));
}

cplx EffectiveDiagonal::derivative(int n, cplx z) const {
  if (params_.lambda == 0.0 || frozen_) return 0.0;
  return params_.lambda * params_.lambda * sigma_prime(params_, n, z, sheets_(n));
}

FractionValue continued_fraction(const EffectiveDiagonal& diagonal, cplx z,
                                 FoldDirection direction, int depth, int center) {
  if (depth < 1) throw DomainError("continued-fraction depth must be positive");
  const double half = 0.5 * diagonal.params().A;
  const double fold = half * half;
  if (fold == 0.0) return {0.0, 0.0, depth};

  const int step = direction == FoldDirection::up ? 1 : -1;
  cplx tail{0.0, 0.0};
  cplx tail_prime{0.0, 0.0};
  for (int level = depth; level >= 1; --level) {
    const int n = center + step * level;
    const cplx denom = z - diagonal.value(n, z) - tail;
    const cplx denom_prime = 1.0 - diagonal.derivative(n, z) - tail_prime;
    const cplx value = fold / denom;
    tail_prime = -value * denom_prime / denom;
    tail = value;
  }
  return {tail, tail_prime, depth};
}

FractionValue continued_fraction_adaptive(const EffectiveDiagonal& diagonal, cplx z,
                                          FoldDirection direction,
                                          const SolverOptions& options, int center) {
  int depth = options.min_depth;
  auto previous = continued_fraction(diagonal, z, direction, depth, center);
  while (depth * 2 <= options.max_depth) {
    depth *= 2;
    auto current = continued_fraction(diagonal, z, direction, depth, center);
    const double change = std::abs(current.value - previous.value);
    if (change < options.fraction_tolerance * std::max(1.0, std::abs(current.value))) {
      // Report the shallower depth that already met the tolerance.
      previous.depth = depth / 2;
      return previous;
    }
    previous = current;
  }
  throw ConvergenceError("continued fraction not converged at depth " + std::to_string(depth));
}

DispersionValue dispersion(const EffectiveDiagonal& diagonal, cplx z,
                           const SolverOptions& options, int center) {
  const auto up = continued_fraction_adaptive(diagonal, z, FoldDirection::up, options, center);
  const auto down = continued_fraction_adaptive(diagonal, z, FoldDirection::down, options, center);
  const cplx value = z - diagonal.value(center, z) - up.value - down.value;
  const cplx derivative = 1.0 - diagonal.derivative(center, z) - up.derivative - down.derivative;
  return {value, derivative, std::max(up.depth, down.depth)};
}

cplx CoefficientMap::sum() const {
  cplx total{0.0, 0.0};
  for (const auto& v : values_) total += v;
  return total;
}

CoefficientMap right_coefficients(const EffectiveDiagonal& diagonal, cplx z,
                                  const SolverOptions& options) {
  const cplx above = diagonal.coupling_up();
  auto map = coefficient_chain(diagonal, z, options.window, tail_depth_for(diagonal, z, options),
                               -above, above);
  check_edge_decay(map, options.edge_decay);
  return map;
}

CoefficientMap left_coefficients(const EffectiveDiagonal& diagonal, cplx z,
                                 const SolverOptions& options) {
  const cplx above = diagonal.coupling_up();
  auto map = coefficient_chain(diagonal, z, options.window, tail_depth_for(diagonal, z, options),
                               above, -above);
  check_edge_decay(map, options.edge_decay);
  return map;
}

ResonanceState solve_resonance(const ModelParams& params, const SolverOptions& options) {
  options.validate();
  const cplx seed = options.seed_policy == SeedPolicy::user ? options.user_seed
                                                            : perturbative_seed(params, options);

  const ChannelWindow classification{-(options.window + options.max_depth),
                                     options.window + options.max_depth};
  SheetSelector sheets = sheets_for(params, seed, options);
  RootResult root;
  try {
    root = find_root(EffectiveDiagonal(params, sheets), seed, options);
    const SheetSelector settled = sheets_for(params, root.z, options);
    if (!settled.same_classification(sheets, classification)) {
      sheets = settled;
      root = find_root(EffectiveDiagonal(params, sheets), root.z, options);
    }
  } catch (const DomainError& e) {
    throw ConvergenceError(std::string("quasi-energy search left the continuation region: ") +
                           e.what());
  }

  if (root.z.imag() > 1e-12) {
    throw ConvergenceError("root found in the upper half plane (Im z = " +
                           std::to_string(root.z.imag()) + "): sheet-selection fault");
  }

  const EffectiveDiagonal diagonal(params, sheets);
  ResonanceState state;
  state.params = params;
  state.z = root.z;
  state.sheets = sheets;
  state.window = options.window;
  state.residual = root.residual;
  state.depth = root.depth;
  state.iterations = root.iterations;
  state.used_muller = root.used_muller;
  state.right = right_coefficients(diagonal, root.z, options);
  state.left = left_coefficients(diagonal, root.z, options);
  return normalize(std::move(state));
}

ResonanceState normalize(ResonanceState state) {
  const double coupling2 = state.params.lambda * state.params.lambda;
  cplx product{0.0, 0.0};
  double scale = 0.0;
  for (int n = state.right.lo(); n <= state.right.hi(); ++n) {
    const cplx lr = state.left[n] * state.right[n];
    cplx continuum{0.0, 0.0};
    if (coupling2 != 0.0) {
      const int channel = n;
      continuum = -coupling2 * sigma_prime(state.params, channel, state.z, state.sheets(channel));
    }
    product += lr * (1.0 + continuum);
    scale += std::abs(lr) * (1.0 + std::abs(continuum));
  }
  if (!(std::abs(product) > 1e-12 * scale)) {
    throw ConvergenceError("vanishing biorthogonal norm (exceptional point)");
  }
  state.norm = 1.0 / product;
  state.emission = state.norm / (2.0 * kPi) * state.right.sum();
  return state;
}

ResonanceState shift_mode(const ResonanceState& state, int m) {
  ResonanceState shifted = state;
  shifted.z = state.z + m * state.params.omega;
  shifted.mode = state.mode + m;
  shifted.right = state.right.shifted(m);
  shifted.left = state.left.shifted(m);
  shifted.sheets = SheetSelector(state.params, shifted.z);
  if (state.sheets.reference().imag() >= 0.0) shifted.sheets = state.sheets;
  return shifted;
}

cplx c_product(const ResonanceState& left, const ResonanceState& right) {
  const ModelParams& params = right.params;
  const double coupling2 = params.lambda * params.lambda;
  const int lo = std::max(left.left.lo(), right.right.lo());
  const int hi = std::min(left.left.hi(), right.right.hi());
  cplx product{0.0, 0.0};
  for (int n = lo; n <= hi; ++n) {
    const cplx lr = left.left[n] * right.right[n];
    if (lr == cplx{}) continue;
    cplx continuum{0.0, 0.0};
    if (coupling2 != 0.0) {
      const cplx za = left.z;
      const cplx zb = right.z;
      if (std::abs(za - zb) < 1e-12 * std::max(1.0, std::abs(za))) {
        continuum = -coupling2 * sigma_prime(params, n, za, left.sheets(n));
      } else {
        // sum_k lambda^2 V_k^2 / ((a - e_k)(b - e_k)) as a divided difference.
        const cplx sa = sigma(params, n, za, left.sheets(n));
        const cplx sb = sigma(params, n, zb, right.sheets(n));
        continuum = -coupling2 * (sa - sb) / (za - zb);
      }
    }
    product += lr * (1.0 + continuum);
  }
  return left.norm_sqrt() * right.norm_sqrt() * product;
}

}  // namespace fhhg

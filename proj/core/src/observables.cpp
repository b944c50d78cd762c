#include "fhhg/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fhhg/errors.hpp"
#include "fhhg/parallel.hpp"

namespace fhhg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWindowTolerance = 1e-8;

void require_mode_window(int mode_window) {
  if (mode_window < 0) throw DomainError("mode_window must be non-negative");
}

// Channel index, in the state's own labelling, that emits into mode m.
int stored_channel(const ResonanceState& state, int m) { return state.mode + channel_of_mode(m); }

cplx principal_energy(const ResonanceState& state) {
  return state.z - state.mode * state.params.omega;
}

double coupling_density(double k) { return 2.0 * std::abs(k); }  // v_k^2

double coherent_spectrum(const ResonanceState& state, double k, int mode_window) {
  const double ek = std::abs(k);
  cplx amplitude{0.0, 0.0};
  for (int m = -mode_window; m <= mode_window; ++m) {
    const int n = stored_channel(state, m);
    amplitude += state.right[n] / (state.channel_energy(n) - ek);
  }
  const double lambda = state.params.lambda;
  return std::norm(state.pole_weight()) * lambda * lambda * coupling_density(k) *
         std::norm(amplitude);
}

double lorentzian(const ResonanceState& state, int m, double k) {
  const int n = stored_channel(state, m);
  const cplx zn = state.channel_energy(n);
  const double detuning = zn.real() - std::abs(k);
  const double lambda = state.params.lambda;
  return std::norm(state.pole_weight() * state.right[n]) * lambda * lambda *
         coupling_density(k) / (detuning * detuning + zn.imag() * zn.imag());
}

SpatialFieldDataset field_dataset(const ResonanceState& state, const Grid1D& x_grid, double t,
                                  int mode_window, PolePairing pairing, int threads,
                                  bool decompose) {
  require_mode_window(mode_window);
  if (!(t > 0.0)) throw DomainError("field time t must be positive");

  SpatialFieldDataset out;
  out.x.assign(x_grid.points().begin(), x_grid.points().end());
  out.t = t;
  out.pairing = pairing;
  out.mode_window = mode_window;
  out.modes = emission_modes(state, mode_window);
  const std::size_t nx = out.x.size();
  const std::size_t nm = out.modes.size();
  out.field.assign(nx, cplx{});
  out.intensity.assign(nx, 0.0);
  if (decompose) {
    out.diagonal.assign(nm, std::vector<double>(nx, 0.0));
    out.interference.assign(nx, 0.0);
  }

  parallel_for(nx, threads, [&](std::size_t i) {
    std::vector<cplx> amplitudes(nm);
    cplx total{0.0, 0.0};
    for (std::size_t j = 0; j < nm; ++j) {
      amplitudes[j] = mode_field(state, out.modes[j], out.x[i], t, pairing);
      total += amplitudes[j];
    }
    out.field[i] = total;
    out.intensity[i] = std::norm(total);
    if (!decompose) return;
    double cross = 0.0;
    for (std::size_t a = 0; a < nm; ++a) {
      out.diagonal[a][i] = std::norm(amplitudes[a]);
      for (std::size_t b = 0; b < nm; ++b) {
        if (a != b) cross += (amplitudes[a] * std::conj(amplitudes[b])).real();
      }
    }
    out.interference[i] = cross;
  });
  return out;
}

}  // namespace

std::vector<int> emission_modes(const ResonanceState& state, int mode_window) {
  require_mode_window(mode_window);
  std::vector<int> modes;
  for (int m = -mode_window; m <= mode_window; ++m) {
    if (state.channel_resonant(stored_channel(state, m))) modes.push_back(m);
  }
  return modes;
}

SpectrumDataset hhg_spectrum(const ResonanceState& state, const Grid1D& k_grid, int mode_window,
                             int threads) {
  require_mode_window(mode_window);
  for (double k : k_grid.points()) {
    if (std::abs(k) > state.params.k_c) throw DomainError("spectrum grid exceeds the cutoff k_c");
  }

  SpectrumDataset out;
  out.k.assign(k_grid.points().begin(), k_grid.points().end());
  out.mode_window = mode_window;
  out.modes = emission_modes(state, mode_window);
  const std::size_t nk = out.k.size();
  out.total.assign(nk, 0.0);
  out.lorentzian_sum.assign(nk, 0.0);
  out.mode_components.assign(out.modes.size(), std::vector<double>(nk, 0.0));

  parallel_for(nk, threads, [&](std::size_t i) {
    const double k = out.k[i];
    out.total[i] = coherent_spectrum(state, k, mode_window);
    double sum = 0.0;
    for (std::size_t j = 0; j < out.modes.size(); ++j) {
      const double value = lorentzian(state, out.modes[j], k);
      out.mode_components[j][i] = value;
      sum += value;
    }
    out.lorentzian_sum[i] = sum;
  });

  for (const auto& peak : locate_peaks(out.k, out.total)) {
    const double wider = coherent_spectrum(state, out.k[peak.index], 2 * mode_window);
    const double base = out.total[peak.index];
    if (std::abs(wider - base) > kWindowTolerance * std::abs(wider)) {
      throw ConvergenceError("spectrum mode window not converged at k = " +
                             std::to_string(out.k[peak.index]));
    }
  }
  return out;
}

std::vector<Peak> locate_peaks(std::span<const double> grid, std::span<const double> values,
                               double min_relative_height) {
  if (grid.size() != values.size()) throw DomainError("peak search: grid/value size mismatch");
  std::vector<Peak> peaks;
  if (values.size() < 3) return peaks;
  const double top = *std::max_element(values.begin(), values.end());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double left = values[i - 1], mid = values[i], right = values[i + 1];
    if (!(mid > left && mid >= right)) continue;
    if (mid < min_relative_height * top) continue;
    // Parabola through the three samples (uniform spacing assumed locally).
    const double h = 0.5 * (grid[i + 1] - grid[i - 1]);
    const double curvature = left - 2.0 * mid + right;
    double offset = 0.0;
    double height = mid;
    if (curvature < 0.0) {
      offset = 0.5 * (left - right) / curvature;
      height = mid - 0.25 * (left - right) * offset;
    }
    peaks.push_back({grid[i] + offset * h, height, i});
  }
  return peaks;
}

cplx mode_field(const ResonanceState& state, int m, double x, double t, PolePairing pairing) {
  const int n = stored_channel(state, m);
  if (!state.channel_resonant(n)) return {0.0, 0.0};
  const cplx zn = state.channel_energy(n);
  const cplx z_time =
      pairing == PolePairing::matched ? zn : principal_energy(state) - m * state.params.omega;
  const cplx phase = cplx(0.0, 1.0) * (zn * std::abs(x) - z_time * t);
  return cplx(0.0, -state.params.lambda) * state.pole_weight() * state.right[n] *
         std::sqrt(4.0 * kPi * zn) * std::exp(phase);
}

SpatialFieldDataset resonance_spatial_field(const ResonanceState& state, const Grid1D& x_grid,
                                            double t, int mode_window, PolePairing pairing,
                                            int threads) {
  auto out = field_dataset(state, x_grid, t, mode_window, pairing, threads, false);
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    cplx wider{0.0, 0.0};
    for (int m : emission_modes(state, 2 * mode_window)) {
      wider += mode_field(state, m, out.x[i], t, pairing);
    }
    if (std::abs(wider - out.field[i]) > kWindowTolerance * std::abs(wider)) {
      throw ConvergenceError("spatial mode window not converged at x = " +
                             std::to_string(out.x[i]));
    }
  }
  return out;
}

SpatialFieldDataset interference_decomposition(const ResonanceState& state, const Grid1D& x_grid,
                                               double t, int mode_window, PolePairing pairing,
                                               int threads) {
  return field_dataset(state, x_grid, t, mode_window, pairing, threads, true);
}

cplx survival_amplitude_floquet(const ResonanceState& state, double t) {
  const double omega = state.params.omega;
  cplx periodic{0.0, 0.0};
  for (int n = state.right.lo(); n <= state.right.hi(); ++n) {
    periodic += state.right[n] * std::exp(cplx(0.0, n * omega * t));
  }
  return state.pole_weight() * std::exp(cplx(0.0, -1.0) * state.z * t) * periodic;
}

}  // namespace fhhg

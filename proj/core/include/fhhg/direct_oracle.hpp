#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fhhg/model.hpp"

namespace fhhg {

/// Box-normalized single-excitation sector: the excited level plus every
/// photon mode k_j = 2 pi j / L (j != 0, |j| <= N/2) with |k_j| <= k_c.
struct DiscretizedSystem {
  ModelParams params;
  double box_length = 0.0;
  int mode_count = 0;   // N, before the cutoff is applied
  double dk = 0.0;
  std::vector<double> k;         // ascending
  std::vector<double> energy;    // |k|
  std::vector<double> coupling;  // V_j = sqrt(4 pi |k_j| / L)

  std::size_t retained() const { return k.size(); }
};

/// Requires L > 0, even N >= 64 and a grid reaching past k_c.
DiscretizedSystem discretize(const ModelParams& params, double box_length, int mode_count);

struct SectorState {
  std::complex<double> psi_d{1.0, 0.0};
  std::vector<std::complex<double>> psi_k;
  double t = 0.0;

  double norm() const;
  double photon_weight() const;
};

/// Psi(0) = |d>.
SectorState excited_state(const DiscretizedSystem& system);

struct EvolveOptions {
  double t_end = 20.0;
  double dt = 1e-3;
  int stride = 100;                    // sample every stride steps
  double norm_tolerance = 1e-8;
  std::vector<double> snapshot_times;  // full states kept at these times
};

struct Trajectory {
  std::vector<double> t;
  std::vector<std::complex<double>> psi_d;
  std::vector<double> norm;
  std::vector<SectorState> snapshots;  // in the order of snapshot_times
  SectorState final_state;
  double max_norm_drift = 0.0;
};

/// Classical RK4 on i dpsi/dt = H(t) psi, with the drive
/// epsilon_d + A sin(omega t) evaluated exactly at every stage. Snapshot times
/// must be multiples of dt. Throws ConvergenceError when the norm drifts by
/// more than options.norm_tolerance.
Trajectory evolve(const DiscretizedSystem& system, SectorState initial,
                  const EvolveOptions& options);

struct Series {
  std::vector<double> grid;
  std::vector<double> values;
};

/// (t, |psi_d|^2) samples of a trajectory.
Series survival_probability(const Trajectory& trajectory);

struct PhotonSpectrum {
  Series spectrum;         // (k_j, |psi_k|^2 L / 2 pi)
  bool premature = false;  // |psi_d|^2 >= 1e-3 when taken
  double remaining_excitation = 0.0;
};

PhotonSpectrum photon_spectrum(const DiscretizedSystem& system, const SectorState& state);

/// f(x) = L^{-1/2} sum_j exp(i k_j x) psi_kj on points inside (-L/2, L/2).
std::vector<std::complex<double>> spatial_field(const DiscretizedSystem& system,
                                                const SectorState& state,
                                                std::span<const double> x, int threads = 1);

}  // namespace fhhg

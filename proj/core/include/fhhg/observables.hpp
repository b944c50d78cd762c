#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fhhg/floquet_solver.hpp"
#include "fhhg/model.hpp"

namespace fhhg {

/// Emission mode m radiates at Re z + m omega, i.e. through channel n = -m.
inline int channel_of_mode(int m) { return -m; }

/// Open emission modes within [-mode_window, mode_window], ascending.
std::vector<int> emission_modes(const ResonanceState& state, int mode_window);

struct SpectrumDataset {
  std::vector<double> k;
  std::vector<double> total;           // coherent pole sum, all channels
  std::vector<double> lorentzian_sum;  // incoherent Lorentzians of the open modes
  std::vector<int> modes;              // open emission modes m
  std::vector<std::vector<double>> mode_components;  // [mode][k]
  int mode_window = 0;
};

/// Long-time photon spectrum, as a density in k:
///
///   S(k) = |N sum_n L^(n)|^2 lambda^2 v_k^2 |sum_n R^(n) / (z - n omega - |k|)|^2
///
/// with v_k^2 = 2|k|. Throws DomainError for |k| > k_c and ConvergenceError
/// when doubling the mode window changes any local maximum by more than 1e-8
/// relative.
SpectrumDataset hhg_spectrum(const ResonanceState& state, const Grid1D& k_grid,
                             int mode_window = 16, int threads = 1);

/// Interior local maxima of a sampled curve with three-point parabolic
/// refinement. Peaks below min_relative_height * max(values) are dropped.
struct Peak {
  double position;
  double height;
  std::size_t index;
};
std::vector<Peak> locate_peaks(std::span<const double> grid, std::span<const double> values,
                               double min_relative_height = 0.0);

/// Which quasi-energy multiplies t in the pole sum of the field.
///  matched:    exp(-i z_n t) exp(+i z_n |x|), z_n = z - n omega
///  as_printed: exp(-i (z + n omega) t) exp(+i z_n |x|)
enum class PolePairing { matched, as_printed };

struct SpatialFieldDataset {
  std::vector<double> x;
  double t = 0.0;
  std::vector<cplx> field;
  std::vector<double> intensity;
  std::vector<int> modes;                      // open emission modes m
  std::vector<std::vector<double>> diagonal;   // [mode][x]  |a_m|^2
  std::vector<double> interference;            // sum over m != m' of a_m conj(a_m')
  PolePairing pairing = PolePairing::matched;
  int mode_window = 0;
};

/// Amplitude of emission mode m at (x, t) from the residue of its pole,
/// -i lambda N sum L * R^(n) sqrt(4 pi z_n) exp(-i z_t t + i z_n |x|) with
/// n = -m, and the continuum convention <x|k> = exp(ikx) / sqrt(2 pi).
cplx mode_field(const ResonanceState& state, int m, double x, double t,
                PolePairing pairing = PolePairing::matched);

/// Resonance-pole part of the photon field and its intensity.
SpatialFieldDataset resonance_spatial_field(const ResonanceState& state, const Grid1D& x_grid,
                                            double t, int mode_window = 16,
                                            PolePairing pairing = PolePairing::matched,
                                            int threads = 1);

/// Same field with |f|^2 split into per-mode diagonal terms and the
/// cross-mode interference remainder.
SpatialFieldDataset interference_decomposition(const ResonanceState& state, const Grid1D& x_grid,
                                               double t, int mode_window = 16,
                                               PolePairing pairing = PolePairing::matched,
                                               int threads = 1);

/// Pole contribution to <d|Psi(t)> for Psi(0) = |d>:
///   N (sum_n L^(n)) e^{-i z t} sum_n R^(n) e^{i n omega t}.
cplx survival_amplitude_floquet(const ResonanceState& state, double t);

}  // namespace fhhg

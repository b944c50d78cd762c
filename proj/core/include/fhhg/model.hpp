#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace fhhg {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Physical parameters of the driven emitter, in units hbar = c = 1.
///
/// The excited level oscillates as epsilon_d + A sin(omega t) and couples with
/// strength lambda to a 1D photon continuum with dispersion |k|, cut off at
/// |k| <= k_c.
struct ModelParams {
  double epsilon_d = 1.0;
  double A = 0.0;
  double omega = 1.0;
  double lambda = 0.0;
  double k_c = kTwoPi;

  double period() const { return kTwoPi / omega; }
  double drive_ratio() const { return A / omega; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Validates and bundles the parameters. Throws DomainError naming the field.
ModelParams make_model(double epsilon_d, double A, double omega, double lambda,
                       double k_c = kTwoPi);

enum class GridKind { momentum, position, time };

/// Strictly increasing sample points along one axis.
class Grid1D {
 public:
  static Grid1D uniform(double lo, double hi, std::size_t count, GridKind kind);
  static Grid1D from_points(std::vector<double> points, GridKind kind);

  std::span<const double> points() const { return points_; }
  GridKind kind() const { return kind_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

 private:
  Grid1D(std::vector<double> points, GridKind kind)
      : points_(std::move(points)), kind_(kind) {}

  std::vector<double> points_;
  GridKind kind_;
};

/// Inclusive integer range of Floquet channel indices.
struct ChannelWindow {
  int lo = -32;
  int hi = 32;

  static ChannelWindow symmetric(int half_width) { return {-half_width, half_width}; }
  int size() const { return hi - lo + 1; }
};

/// Channels n whose bare resonance epsilon_d - n*omega lies inside the
/// continuum (0, k_c). Sorted ascending.
struct ChannelSet {
  std::vector<int> open;

  bool contains(int n) const;
  bool empty() const { return open.empty(); }
};

/// True iff 0 < epsilon_d - n*omega < k_c.
bool channel_open(const ModelParams& params, int n);

ChannelSet open_channels(const ModelParams& params, ChannelWindow window);

}  // namespace fhhg

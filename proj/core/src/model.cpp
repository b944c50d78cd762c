#include "fhhg/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fhhg/errors.hpp"

namespace fhhg {

namespace {

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(field) + " must be finite");
  }
}

}  // namespace

ModelParams make_model(double epsilon_d, double A, double omega, double lambda,
                       double k_c) {
  require_finite(epsilon_d, "epsilon_d");
  require_finite(A, "A");
  require_finite(omega, "omega");
  require_finite(lambda, "lambda");
  require_finite(k_c, "k_c");
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  if (!(k_c > 0.0)) throw DomainError("k_c must be positive");
  if (lambda < 0.0) throw DomainError("lambda must be non-negative");
  return ModelParams{epsilon_d, A, omega, lambda, k_c};
}

Grid1D Grid1D::uniform(double lo, double hi, std::size_t count, GridKind kind) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("grid bounds must be finite");
  if (count == 0) throw DomainError("grid count must be positive");
  if (count == 1) return Grid1D({lo}, kind);
  if (!(hi > lo)) throw DomainError("grid max must exceed grid min");
  std::vector<double> points(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) points[i] = lo + step * static_cast<double>(i);
  points.back() = hi;
  return Grid1D(std::move(points), kind);
}

Grid1D Grid1D::from_points(std::vector<double> points, GridKind kind) {
  if (points.empty()) throw DomainError("grid must not be empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw DomainError("grid points must be finite");
    if (i > 0 && !(points[i] > points[i - 1])) {
      throw DomainError("grid points must be strictly increasing");
    }
  }
  return Grid1D(std::move(points), kind);
}

bool ChannelSet::contains(int n) const {
  return std::binary_search(open.begin(), open.end(), n);
}

bool channel_open(const ModelParams& params, int n) {
  const double e = params.epsilon_d - n * params.omega;
  return e > 0.0 && e < params.k_c;
}

ChannelSet open_channels(const ModelParams& params, ChannelWindow window) {
  if (window.lo > 0 || window.hi < 0) {
    throw DomainError("channel window must contain 0");
  }
  ChannelSet set;
  for (int n = window.lo; n <= window.hi; ++n) {
    if (channel_open(params, n)) set.open.push_back(n);
  }
  return set;
}

}  // namespace fhhg

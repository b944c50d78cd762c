#include "fhhg/bessel.hpp"

#include <cmath>
#include <cstdlib>

#include "fhhg/errors.hpp"

namespace fhhg {

namespace {

constexpr double kRescaleThreshold = 1e250;

int start_order(int max_order, double x) {
  // Far enough above the turning point that the seeded error has decayed
  // below double precision before reaching max_order.
  const double reach = std::max(static_cast<double>(max_order), x);
  int start = static_cast<int>(reach + 30.0 + 8.0 * std::sqrt(reach + 1.0));
  return start + (start % 2);
}

}  // namespace

std::vector<double> bessel_j_sequence(int max_order, double x) {
  if (max_order < 0) throw DomainError("bessel order must be non-negative");
  if (!std::isfinite(x)) throw DomainError("bessel argument must be finite");

  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }

  const int top = start_order(max_order, ax);
  std::vector<double> j(static_cast<std::size_t>(top) + 2, 0.0);
  j[static_cast<std::size_t>(top) + 1] = 0.0;
  j[static_cast<std::size_t>(top)] = 1e-300;
  for (int k = top; k >= 1; --k) {
    auto ku = static_cast<std::size_t>(k);
    j[ku - 1] = (2.0 * k / ax) * j[ku] - j[ku + 1];
    if (std::abs(j[ku - 1]) > kRescaleThreshold) {
      for (std::size_t i = ku - 1; i <= static_cast<std::size_t>(top); ++i) j[i] *= 1e-250;
    }
  }

  double closure = j[0];
  for (int k = 2; k <= top; k += 2) closure += 2.0 * j[static_cast<std::size_t>(k)];

  for (int n = 0; n <= max_order; ++n) {
    double value = j[static_cast<std::size_t>(n)] / closure;
    if (x < 0.0 && (n % 2 != 0)) value = -value;
    out[static_cast<std::size_t>(n)] = value;
  }
  return out;
}

double bessel_j(int n, double x) {
  const int order = std::abs(n);
  const double value = bessel_j_sequence(order, x)[static_cast<std::size_t>(order)];
  return (n < 0 && (order % 2 != 0)) ? -value : value;
}

double BesselWeightTable::total() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

BesselWeightTable bessel_weights(double x, int window) {
  if (window < 0) throw DomainError("bessel window must be non-negative");
  const auto positive = bessel_j_sequence(window, x);
  BesselWeightTable table{x, window, std::vector<double>(2 * static_cast<std::size_t>(window) + 1)};
  for (int n = -window; n <= window; ++n) {
    const double jn = positive[static_cast<std::size_t>(std::abs(n))];
    table.weights[static_cast<std::size_t>(n + window)] = jn * jn;
  }
  return table;
}

}  // namespace fhhg

#pragma once

#include <vector>

namespace fhhg {

/// Integer-order Bessel function of the first kind, J_n(x).
///
/// Miller's backward recurrence started well above max(|n|, x), normalized by
/// the closure identity J_0 + 2 sum_k J_2k = 1. Negative orders and arguments
/// use J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
double bessel_j(int n, double x);

/// J_0(x) ... J_max_order(x) from a single backward sweep.
std::vector<double> bessel_j_sequence(int max_order, double x);

/// J_n(x)^2 for n in [-window, window].
struct BesselWeightTable {
  double x = 0.0;
  int window = 0;
  std::vector<double> weights;  // index n + window

  double operator[](int n) const { return weights[static_cast<std::size_t>(n + window)]; }
  double total() const;
};

BesselWeightTable bessel_weights(double x, int window);

}  // namespace fhhg

#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "fhhg/direct_oracle.hpp"

namespace fhhg {

enum class Calibration { none, single_scalar };

/// Outcome of checking a predicted series against a reference on one grid.
struct ComparisonReport {
  std::string observable;
  double max_relative_error = 0.0;
  double calibration = 1.0;  // scalar applied to the prediction
  double tolerance = 0.0;
  bool passed = false;
  std::size_t worst_index = 0;
  std::size_t points = 0;
};

/// Pointwise relative error |c p_i - r_i| / |r_i| over `indices` (all points
/// when empty). With single_scalar calibration, c = r_j / p_j at
/// `calibration_index`; otherwise c = 1. Throws DomainError when the grids
/// differ.
ComparisonReport compare(std::string observable, const Series& predicted, const Series& reference,
                         double tolerance, std::span<const std::size_t> indices = {},
                         Calibration calibration = Calibration::none,
                         std::size_t calibration_index = 0);

}  // namespace fhhg

#include "fhhg/compare.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "fhhg/errors.hpp"

namespace fhhg {

ComparisonReport compare(std::string observable, const Series& predicted, const Series& reference,
                         double tolerance, std::span<const std::size_t> indices,
                         Calibration calibration, std::size_t calibration_index) {
  if (predicted.grid.size() != reference.grid.size() ||
      predicted.values.size() != predicted.grid.size() ||
      reference.values.size() != reference.grid.size()) {
    throw DomainError(observable + ": grid mismatch (sizes differ)");
  }
  for (std::size_t i = 0; i < predicted.grid.size(); ++i) {
    const double scale = std::max(1.0, std::abs(reference.grid[i]));
    if (std::abs(predicted.grid[i] - reference.grid[i]) > 1e-9 * scale) {
      throw DomainError(observable + ": grid mismatch at index " + std::to_string(i));
    }
  }

  ComparisonReport report;
  report.observable = std::move(observable);
  report.tolerance = tolerance;
  if (calibration == Calibration::single_scalar) {
    if (calibration_index >= predicted.values.size() || predicted.values[calibration_index] == 0.0) {
      throw DomainError(report.observable + ": invalid calibration point");
    }
    report.calibration = reference.values[calibration_index] / predicted.values[calibration_index];
  }

  std::vector<std::size_t> all;
  if (indices.empty()) {
    all.resize(predicted.values.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    indices = all;
  }
  for (std::size_t i : indices) {
    if (i >= predicted.values.size()) throw DomainError(report.observable + ": index out of range");
    const double p = report.calibration * predicted.values[i];
    const double r = reference.values[i];
    const double diff = std::abs(p - r);
    const double err = r != 0.0 ? diff / std::abs(r) : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (report.points == 0 || err > report.max_relative_error) {
      report.max_relative_error = err;
      report.worst_index = i;
    }
    ++report.points;
  }
  report.passed = report.max_relative_error <= tolerance;
  return report;
}

}  // namespace fhhg

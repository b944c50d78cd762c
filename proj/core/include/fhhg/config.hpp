#pragma once

#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>

#include "fhhg/errors.hpp"
#include "fhhg/floquet_solver.hpp"
#include "fhhg/model.hpp"
#include "fhhg/observables.hpp"

namespace fhhg {

/// Malformed or invalid configuration. Messages start with the offending key
/// (or "line N" for syntax errors).
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  Grid1D build(GridKind kind) const { return Grid1D::uniform(min, max, static_cast<std::size_t>(count), kind); }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct OracleSettings {
  double box_length = 400.0;
  int mode_count = 8192;
  double dt = 1e-3;
  double t_end = 20.0;
  int stride = 100;
  double spectrum_time = 30.0;

  friend bool operator==(const OracleSettings&, const OracleSettings&) = default;
};

struct SweepSettings {
  GridSpec drive_ratio{0.5, 3.0, 6};
  GridSpec omega{0.8, 1.6, 5};

  friend bool operator==(const SweepSettings&, const SweepSettings&) = default;
};

/// Which of A / A_over_omega the user supplied; the other is derived.
enum class DriveInput { amplitude, ratio };

struct RunConfig {
  ModelParams model;
  DriveInput drive_input = DriveInput::ratio;
  SolverOptions solver;
  int channel_window = 32;
  int mode_window = 16;
  PolePairing pairing = PolePairing::matched;
  GridSpec k_grid{0.0, 6.28, 3141};
  GridSpec x_grid{-30.0, 30.0, 1201};
  double time = 20.0;
  OracleSettings oracle;
  bool compare_oracle = false;
  int threads = 1;
  SweepSettings sweep;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the JSON configuration, fills defaults and validates every field.
/// Required: epsilon_d, omega and exactly one of A / A_over_omega.
/// Unknown keys are errors.
RunConfig parse_config(std::string_view text);

/// As above, after applying `key.path=value` overrides to the document.
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides);

/// Sets a dotted key path; the value is parsed as JSON, falling back to a
/// string.
void apply_override(nlohmann::json& document, std::string_view assignment);

/// Every setting, defaults included.
nlohmann::json config_to_json(const RunConfig& config);
std::string serialize_config(const RunConfig& config);

}  // namespace fhhg

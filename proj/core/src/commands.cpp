#include "fhhg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "fhhg/bessel.hpp"
#include "fhhg/compare.hpp"
#include "fhhg/direct_oracle.hpp"
#include "fhhg/errors.hpp"
#include "fhhg/floquet_solver.hpp"
#include "fhhg/observables.hpp"
#include "fhhg/parallel.hpp"
#include "fhhg/perturbation.hpp"

namespace fhhg {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Re-throws with the stage name prefixed, keeping the error category.
template <class F>
auto stage(const char* name, F&& body) {
  const auto prefix = [name](const std::exception& e) { return std::string(name) + ": " + e.what(); };
  try {
    return body();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix(e));
  } catch (const DomainError& e) {
    throw DomainError(prefix(e));
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix(e));
  }
}

// The thread count is left out: data files must not depend on it.
json base_metadata(const RunConfig& config, const std::string& command) {
  json config_json = config_to_json(config);
  config_json.erase("threads");
  return {{"command", command}, {"config", config_json}};
}

json solver_metadata(const ResonanceState& s) {
  return {{"re_z", s.z.real()},
          {"im_z", s.z.imag()},
          {"residual", s.residual},
          {"depth", s.depth},
          {"iterations", s.iterations},
          {"window", s.window},
          {"used_muller", s.used_muller},
          {"re_norm", s.norm.real()},
          {"im_norm", s.norm.imag()}};
}

ResonanceState solve(const RunConfig& config) {
  return stage("solve", [&] { return solve_resonance(config.model, config.solver); });
}

std::string mode_label(int m) { return "m" + std::to_string(m); }

// ---------------------------------------------------------------- eigen

std::vector<Dataset> run_eigen(const RunConfig& config) {
  const ResonanceState s = solve(config);
  // NaN when a channel threshold sits exactly on epsilon_d + n omega.
  cplx z_pert{std::nan(""), std::nan("")};
  try {
    z_pert = perturbative_eigenvalue(config.model, config.solver.perturbation_window);
  } catch (const DomainError&) {
  }
  const ChannelSet open = open_channels(config.model, ChannelWindow::symmetric(config.channel_window));

  Dataset pole{"eigen_pole",
               {{"re_z", "energy"},
                {"im_z", "energy"},
                {"residual", "energy"},
                {"window", "1"},
                {"depth", "1"},
                {"iterations", "1"},
                {"re_pole_weight", "1"},
                {"im_pole_weight", "1"},
                {"re_norm", "1"},
                {"im_norm", "1"},
                {"re_emission_weight", "1"},
                {"im_emission_weight", "1"},
                {"re_z_perturbative", "energy"},
                {"im_z_perturbative", "energy"}},
               {},
               base_metadata(config, "eigen")};
  const cplx w = s.pole_weight();
  pole.add_row({s.z.real(), s.z.imag(), s.residual, static_cast<double>(s.window),
                static_cast<double>(s.depth), static_cast<double>(s.iterations), w.real(), w.imag(),
                s.norm.real(), s.norm.imag(), s.emission.real(), s.emission.imag(), z_pert.real(),
                z_pert.imag()});
  pole.metadata["solver"] = solver_metadata(s);
  pole.metadata["open_channels"] = open.open;

  Dataset coeffs{"eigen_coefficients",
                 {{"n", "1"},
                  {"re_R", "1"},
                  {"im_R", "1"},
                  {"re_L", "1"},
                  {"im_L", "1"},
                  {"open", "1"}},
                 {},
                 base_metadata(config, "eigen")};
  coeffs.metadata["solver"] = solver_metadata(s);
  for (int n = s.right.lo(); n <= s.right.hi(); ++n) {
    coeffs.add_row({static_cast<double>(n), s.right[n].real(), s.right[n].imag(), s.left[n].real(),
                    s.left[n].imag(), s.channel_resonant(n) ? 1.0 : 0.0});
  }
  return {pole, coeffs};
}

// ------------------------------------------------------------- spectrum

std::vector<Dataset> run_spectrum(const RunConfig& config) {
  const ResonanceState s = solve(config);
  const Grid1D grid = stage("spectrum", [&] { return config.k_grid.build(GridKind::momentum); });
  const SpectrumDataset spec = stage("spectrum", [&] {
    return hhg_spectrum(s, grid, config.mode_window, config.threads);
  });

  Dataset table{"spectrum", {{"k", "1/length"}, {"S_total", "length"}, {"S_lorentzian_sum", "length"}},
                {}, base_metadata(config, "spectrum")};
  for (int m : spec.modes) table.columns.push_back({"L_" + mode_label(m), "length"});
  table.metadata["solver"] = solver_metadata(s);
  table.metadata["modes"] = spec.modes;
  table.metadata["mode_window"] = spec.mode_window;
  std::vector<double> row(table.columns.size());
  for (std::size_t i = 0; i < spec.k.size(); ++i) {
    row[0] = spec.k[i];
    row[1] = spec.total[i];
    row[2] = spec.lorentzian_sum[i];
    for (std::size_t j = 0; j < spec.modes.size(); ++j) row[3 + j] = spec.mode_components[j][i];
    table.add_row(row);
  }

  // Label every local maximum of the total by the nearest Re z + m omega.
  Dataset peaks{"spectrum_peaks",
                {{"m", "1"},
                 {"expected_k", "1/length"},
                 {"peak_k", "1/length"},
                 {"peak_height", "length"},
                 {"weight", "1"},
                 {"weight_ratio", "1"},
                 {"bessel_ratio", "1"}},
                {},
                base_metadata(config, "spectrum")};
  const double omega = config.model.omega;
  const double x = config.model.drive_ratio();
  const double j0 = bessel_j(0, x);
  const auto found = locate_peaks(spec.k, spec.total, 1e-6);
  std::map<int, Peak> best;
  for (const Peak& p : found) {
    const int m = static_cast<int>(std::lround((p.position - s.z.real()) / omega));
    if (std::find(spec.modes.begin(), spec.modes.end(), m) == spec.modes.end()) continue;
    auto it = best.find(m);
    if (it == best.end() || p.height > it->second.height) best[m] = p;
  }
  const double lambda2 = config.model.lambda * config.model.lambda;
  double weight0 = kNaN;
  if (auto it = best.find(0); it != best.end() && lambda2 > 0.0) {
    weight0 = it->second.height / (lambda2 * 2.0 * it->second.position);
  }
  for (const auto& [m, p] : best) {
    const double weight = lambda2 > 0.0 ? p.height / (lambda2 * 2.0 * p.position) : kNaN;
    const double jm = bessel_j(m, x);
    peaks.add_row({static_cast<double>(m), s.z.real() + m * omega, p.position, p.height, weight,
                   weight / weight0, jm * jm / (j0 * j0)});
  }
  peaks.metadata["weight_definition"] = "peak_height / (lambda^2 * 2 * peak_k)";
  return {table, peaks};
}

// -------------------------------------------------------------- oracle

struct OracleRun {
  DiscretizedSystem system;
  Trajectory trajectory;
  SectorState at_field_time;
  SectorState at_spectrum_time;
};

OracleRun run_oracle(const RunConfig& config, bool need_spectrum) {
  return stage("oracle", [&] {
    OracleRun run;
    run.system = discretize(config.model, config.oracle.box_length, config.oracle.mode_count);
    EvolveOptions opt;
    opt.dt = config.oracle.dt;
    opt.stride = config.oracle.stride;
    opt.t_end = std::max(config.oracle.t_end, config.time);
    if (need_spectrum) opt.t_end = std::max(opt.t_end, config.oracle.spectrum_time);
    opt.snapshot_times = {config.time};
    if (need_spectrum) opt.snapshot_times.push_back(config.oracle.spectrum_time);
    run.trajectory = evolve(run.system, excited_state(run.system), opt);
    run.at_field_time = run.trajectory.snapshots[0];
    if (need_spectrum) run.at_spectrum_time = run.trajectory.snapshots[1];
    return run;
  });
}

json oracle_metadata(const OracleRun& run) {
  return {{"retained_modes", run.system.retained()},
          {"dk", run.system.dk},
          {"max_norm_drift", run.trajectory.max_norm_drift}};
}

Grid1D field_grid(const RunConfig& config) {
  return stage("spatial", [&] { return config.x_grid.build(GridKind::position); });
}

// Largest |f|^2 in |x| < 18 is the calibration point for the resonance field.
std::size_t calibration_point(const std::vector<double>& x, const std::vector<double>& reference,
                              double inner) {
  std::size_t best = 0;
  double top = -1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) < inner && reference[i] > top) {
      top = reference[i];
      best = i;
    }
  }
  if (top <= 0.0) throw DomainError("spatial: no field inside the calibration region");
  return best;
}

// ------------------------------------------------------------- spatial

std::vector<Dataset> run_spatial(const RunConfig& config) {
  const ResonanceState s = solve(config);
  const Grid1D grid = field_grid(config);
  const SpatialFieldDataset f = stage("spatial", [&] {
    return interference_decomposition(s, grid, config.time, config.mode_window, config.pairing,
                                      config.threads);
  });

  Dataset table{"spatial",
                {{"x", "length"},
                 {"F_resonance", "1/length"},
                 {"re_f_resonance", "1/sqrt(length)"},
                 {"im_f_resonance", "1/sqrt(length)"}},
                {},
                base_metadata(config, "spatial")};
  for (int m : f.modes) table.columns.push_back({"diag_" + mode_label(m), "1/length"});
  table.columns.push_back({"interference", "1/length"});
  table.metadata["solver"] = solver_metadata(s);
  table.metadata["modes"] = f.modes;
  table.metadata["t"] = f.t;
  table.metadata["pairing"] = f.pairing == PolePairing::matched ? "matched" : "as_printed";

  std::vector<double> oracle_intensity;
  double calibration = 1.0;
  if (config.compare_oracle) {
    const OracleRun run = run_oracle(config, false);
    const auto field = stage("oracle", [&] {
      return spatial_field(run.system, run.at_field_time, f.x, config.threads);
    });
    for (const auto& v : field) oracle_intensity.push_back(std::norm(v));
    const std::size_t at = calibration_point(f.x, oracle_intensity, 18.0);
    calibration = oracle_intensity[at] / f.intensity[at];
    table.columns.push_back({"F_total", "1/length"});
    table.columns.push_back({"F_continuum", "1/length"});
    table.metadata["oracle"] = oracle_metadata(run);
    table.metadata["calibration"] = calibration;
    table.metadata["calibration_x"] = f.x[at];

    std::vector<cplx> continuum(field.size());
    const double amp_scale = std::sqrt(calibration);
    for (std::size_t i = 0; i < field.size(); ++i) continuum[i] = field[i] - amp_scale * f.field[i];
    std::vector<double> row(table.columns.size());
    for (std::size_t i = 0; i < f.x.size(); ++i) {
      std::size_t c = 0;
      row[c++] = f.x[i];
      row[c++] = f.intensity[i];
      row[c++] = f.field[i].real();
      row[c++] = f.field[i].imag();
      for (const auto& d : f.diagonal) row[c++] = d[i];
      row[c++] = f.interference[i];
      row[c++] = oracle_intensity[i];
      row[c++] = std::norm(continuum[i]);
      table.add_row(row);
    }
    return {table};
  }

  std::vector<double> row(table.columns.size());
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    std::size_t c = 0;
    row[c++] = f.x[i];
    row[c++] = f.intensity[i];
    row[c++] = f.field[i].real();
    row[c++] = f.field[i].imag();
    for (const auto& d : f.diagonal) row[c++] = d[i];
    row[c++] = f.interference[i];
    table.add_row(row);
  }
  return {table};
}

// -------------------------------------------------------------- evolve

std::vector<Dataset> run_evolve(const RunConfig& config) {
  const OracleRun run = run_oracle(config, true);
  const json meta = base_metadata(config, "evolve");

  Dataset survival{"evolve_survival",
                   {{"t", "time"}, {"P_survival", "1"}, {"re_psi_d", "1"}, {"im_psi_d", "1"}, {"norm", "1"}},
                   {},
                   meta};
  survival.metadata["oracle"] = oracle_metadata(run);
  for (std::size_t i = 0; i < run.trajectory.t.size(); ++i) {
    const cplx a = run.trajectory.psi_d[i];
    survival.add_row({run.trajectory.t[i], std::norm(a), a.real(), a.imag(), run.trajectory.norm[i]});
  }

  const PhotonSpectrum ps = photon_spectrum(run.system, run.at_spectrum_time);
  Dataset spectrum{"evolve_spectrum", {{"k", "1/length"}, {"S", "length"}}, {}, meta};
  spectrum.metadata["oracle"] = oracle_metadata(run);
  spectrum.metadata["t"] = run.at_spectrum_time.t;
  spectrum.metadata["remaining_excitation"] = ps.remaining_excitation;
  if (ps.premature) {
    spectrum.metadata["warning"] = "excited-state population >= 1e-3 when the spectrum was taken";
  }
  for (std::size_t i = 0; i < ps.spectrum.grid.size(); ++i) {
    spectrum.add_row({ps.spectrum.grid[i], ps.spectrum.values[i]});
  }

  const Grid1D grid = field_grid(config);
  const auto xs = grid.points();
  const auto field = stage("oracle", [&] {
    return spatial_field(run.system, run.at_field_time, xs, config.threads);
  });
  Dataset spatial{"evolve_field",
                  {{"x", "length"}, {"F", "1/length"}, {"re_f", "1/sqrt(length)"}, {"im_f", "1/sqrt(length)"}},
                  {},
                  meta};
  spatial.metadata["t"] = run.at_field_time.t;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    spatial.add_row({xs[i], std::norm(field[i]), field[i].real(), field[i].imag()});
  }
  return {survival, spectrum, spatial};
}

// ------------------------------------------------------------- compare

struct Check {
  std::string name;
  double value;
  double tolerance;
  double calibration;
  bool passed;
};

std::vector<Dataset> run_compare(const RunConfig& config) {
  const ResonanceState s = solve(config);
  const OracleRun run = run_oracle(config, true);
  std::vector<Check> checks;

  // Survival on t in [1, T].
  Series oracle_survival = survival_probability(run.trajectory);
  Series floquet_survival{oracle_survival.grid, {}};
  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < oracle_survival.grid.size(); ++i) {
    const double t = oracle_survival.grid[i];
    floquet_survival.values.push_back(std::norm(survival_amplitude_floquet(s, t)));
    if (t >= 1.0 - 1e-12 && t <= config.time + 1e-12) window.push_back(i);
  }
  const ComparisonReport surv = compare("survival", floquet_survival, oracle_survival, 0.05, window);
  checks.push_back({surv.observable, surv.max_relative_error, surv.tolerance, 1.0, surv.passed});

  // Spectrum peak positions and weights on k > 0.
  const PhotonSpectrum ps = photon_spectrum(run.system, run.at_spectrum_time);
  std::vector<double> kpos, spos;
  for (std::size_t i = 0; i < ps.spectrum.grid.size(); ++i) {
    if (ps.spectrum.grid[i] > 0.0) {
      kpos.push_back(ps.spectrum.grid[i]);
      spos.push_back(ps.spectrum.values[i]);
    }
  }
  const auto peaks = locate_peaks(kpos, spos, 1e-4);
  const double omega = config.model.omega;
  const double x = config.model.drive_ratio();
  double position_error = 0.0;
  double ratio_error = 0.0;
  double weight0 = kNaN;
  for (int m = 0; m <= 3; ++m) {
    const double expected = s.z.real() + m * omega;
    const Peak* near = nullptr;
    for (const auto& p : peaks) {
      if (std::abs(p.position - expected) < 0.5 * omega && (!near || p.height > near->height)) near = &p;
    }
    if (!near) {
      position_error = std::numeric_limits<double>::infinity();
      ratio_error = std::numeric_limits<double>::infinity();
      continue;
    }
    position_error = std::max(position_error, std::abs(near->position - expected));
    const double weight = near->height / near->position;
    if (m == 0) {
      weight0 = weight;
    } else {
      const double jr = std::pow(bessel_j(m, x) / bessel_j(0, x), 2);
      ratio_error = std::max(ratio_error, std::abs(weight / weight0 - jr) / jr);
    }
  }
  checks.push_back({"oracle_peak_positions", position_error, 0.05, 1.0, position_error <= 0.05});
  checks.push_back({"oracle_peak_ratios", ratio_error, 0.2, 1.0, ratio_error <= 0.2});

  // Field at the pulse maxima inside |x| < 18 and outside the light front.
  const Grid1D grid = field_grid(config);
  const auto f = stage("spatial", [&] {
    return resonance_spatial_field(s, grid, config.time, config.mode_window, config.pairing,
                                   config.threads);
  });
  const auto field = stage("oracle", [&] {
    return spatial_field(run.system, run.at_field_time, f.x, config.threads);
  });
  Series oracle_field{f.x, {}};
  for (const auto& v : field) oracle_field.values.push_back(std::norm(v));
  const Series predicted_field{f.x, f.intensity};
  const std::size_t at = calibration_point(f.x, oracle_field.values, 18.0);
  std::vector<std::size_t> maxima;
  const double top = oracle_field.values[at];
  for (const auto& p : locate_peaks(f.x, oracle_field.values, 0.05)) {
    if (std::abs(f.x[p.index]) < 18.0 && oracle_field.values[p.index] >= 0.05 * top) {
      maxima.push_back(p.index);
    }
  }
  const ComparisonReport fr = compare("field_maxima", predicted_field, oracle_field, 0.1, maxima,
                                      Calibration::single_scalar, at);
  checks.push_back({fr.observable, fr.max_relative_error, fr.tolerance, fr.calibration, fr.passed});

  double outside = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    peak = std::max(peak, oracle_field.values[i]);
    if (std::abs(f.x[i]) > 22.0) outside = std::max(outside, oracle_field.values[i]);
  }
  const double front = outside / peak;
  checks.push_back({"light_front_leakage", front, 1e-4, 1.0, front < 1e-4});

  Dataset report{"compare_report",
                 {{"check", "1"}, {"value", "1"}, {"tolerance", "1"}, {"calibration", "1"}, {"passed", "1"}},
                 {},
                 base_metadata(config, "compare")};
  json names = json::array();
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    names.push_back(c.name);
    report.add_row({static_cast<double>(i), c.value, c.tolerance, c.calibration, c.passed ? 1.0 : 0.0});
  }
  report.metadata["checks"] = names;
  report.metadata["solver"] = solver_metadata(s);
  report.metadata["oracle"] = oracle_metadata(run);

  Dataset survival{"compare_survival",
                   {{"t", "time"}, {"P_floquet", "1"}, {"P_oracle", "1"}},
                   {},
                   base_metadata(config, "compare")};
  for (std::size_t i = 0; i < oracle_survival.grid.size(); ++i) {
    survival.add_row({oracle_survival.grid[i], floquet_survival.values[i], oracle_survival.values[i]});
  }
  return {report, survival};
}

// --------------------------------------------------------------- sweep

std::vector<Dataset> run_sweep(const RunConfig& config) {
  const auto ratios = stage("sweep", [&] { return config.sweep.drive_ratio.build(GridKind::time); });
  const auto omegas = stage("sweep", [&] { return config.sweep.omega.build(GridKind::time); });
  const std::size_t nr = ratios.size(), no = omegas.size();

  struct Point {
    cplx z{kNaN, kNaN};
    double residual = kNaN;
    int iterations = 0;
    bool ok = false;
  };
  std::vector<Point> points(nr * no);
  parallel_for(points.size(), config.threads, [&](std::size_t i) {
    const double ratio = ratios[i / no];
    const double omega = omegas[i % no];
    try {
      const ModelParams p = make_model(config.model.epsilon_d, ratio * omega, omega,
                                       config.model.lambda, config.model.k_c);
      const ResonanceState s = solve_resonance(p, config.solver);
      points[i] = {s.z, s.residual, s.iterations, true};
    } catch (const DomainError&) {
    } catch (const ConvergenceError&) {
    }
  });

  Dataset table{"sweep",
                {{"A_over_omega", "1"},
                 {"omega", "energy"},
                 {"re_z", "energy"},
                 {"im_z", "energy"},
                 {"residual", "energy"},
                 {"iterations", "1"},
                 {"status", "1"}},
                {},
                base_metadata(config, "sweep")};
  std::size_t failed = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    if (!p.ok) ++failed;
    table.add_row({ratios[i / no], omegas[i % no], p.z.real(), p.z.imag(), p.residual,
                   static_cast<double>(p.iterations), p.ok ? 1.0 : 0.0});
  }
  table.metadata["failed_points"] = failed;
  return {table};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"eigen", "spectrum", "spatial", "evolve", "compare", "sweep"};
  return names;
}

std::vector<Dataset> run_command(const std::string& name, const RunConfig& config) {
  if (name == "eigen") return run_eigen(config);
  if (name == "spectrum") return run_spectrum(config);
  if (name == "spatial") return run_spatial(config);
  if (name == "evolve") return run_evolve(config);
  if (name == "compare") return run_compare(config);
  if (name == "sweep") return run_sweep(config);
  throw DomainError("unknown command \"" + name + "\"");
}

}  // namespace fhhg

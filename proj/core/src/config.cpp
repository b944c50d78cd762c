#include "fhhg/config.hpp"

#include <cmath>
#include <set>
#include <string>

namespace fhhg {

namespace {

using nlohmann::json;

// Reads the members of one JSON object, remembering which keys were consumed
// so that anything left over can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string prefix) : object_(object), prefix_(std::move(prefix)) {
    if (!object_.is_object()) fail("", "must be an object");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  double number(const std::string& key, double fallback) {
    if (!take(key)) return fallback;
    const auto& v = object_.at(key);
    if (!v.is_number()) fail(key, "must be a number");
    const double value = v.get<double>();
    if (!std::isfinite(value)) fail(key, "must be finite");
    return value;
  }

  int integer(const std::string& key, int fallback) {
    if (!take(key)) return fallback;
    const auto& v = object_.at(key);
    if (!v.is_number_integer()) fail(key, "must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!take(key)) return fallback;
    const auto& v = object_.at(key);
    if (!v.is_boolean()) fail(key, "must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!take(key)) return fallback;
    const auto& v = object_.at(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }

  const json* child(const std::string& key) {
    return take(key) ? &object_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!used_.count(key)) fail(key, "unknown key");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError(path(key) + ": " + message);
  }

  std::string path(const std::string& key) const {
    if (prefix_.empty()) return key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  bool take(const std::string& key) {
    if (!object_.contains(key)) return false;
    used_.insert(key);
    return true;
  }

  const json& object_;
  std::string prefix_;
  std::set<std::string> used_;
};

GridSpec read_grid(const json* node, const std::string& name, GridSpec fallback) {
  if (!node) return fallback;
  ObjectReader r(*node, name);
  GridSpec g;
  g.min = r.number("min", fallback.min);
  g.max = r.number("max", fallback.max);
  g.count = r.integer("count", fallback.count);
  r.finish();
  if (g.count < 1) r.fail("count", "must be positive");
  if (g.count > 1 && !(g.max > g.min)) r.fail("max", "must exceed min");
  return g;
}

json grid_json(const GridSpec& g) { return {{"min", g.min}, {"max", g.max}, {"count", g.count}}; }

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key + ": " + message);
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

RunConfig from_json(const json& doc) {
  ObjectReader r(doc, "");
  RunConfig c;

  const bool has_eps = r.has("epsilon_d");
  const bool has_omega = r.has("omega");
  c.model.epsilon_d = r.number("epsilon_d", 0.0);
  c.model.omega = r.number("omega", 1.0);
  if (has_omega) require(c.model.omega > 0.0, "omega", "must be positive");
  c.model.lambda = r.number("lambda", 0.1);
  require(c.model.lambda >= 0.0, "lambda", "must be non-negative");
  c.model.k_c = r.number("k_c", kTwoPi);
  require(c.model.k_c > 0.0, "k_c", "must be positive");

  const bool has_amplitude = r.has("A");
  const bool has_ratio = r.has("A_over_omega");
  const double amplitude = r.number("A", 0.0);
  const double ratio = r.number("A_over_omega", 0.0);

  if (const json* s = r.child("solver")) {
    ObjectReader sr(*s, "solver");
    SolverOptions& o = c.solver;
    o.window = sr.integer("window", o.window);
    o.min_depth = sr.integer("depth", o.min_depth);
    o.max_depth = sr.integer("max_depth", o.max_depth);
    o.tolerance = sr.number("tolerance", o.tolerance);
    o.fraction_tolerance = sr.number("fraction_tolerance", o.fraction_tolerance);
    o.max_iterations = sr.integer("max_iterations", o.max_iterations);
    o.perturbation_window = sr.integer("perturbation_window", o.perturbation_window);
    o.edge_decay = sr.number("edge_decay", o.edge_decay);
    const std::string seed = sr.text("seed", "perturbative");
    if (seed == "perturbative") {
      o.seed_policy = SeedPolicy::perturbative;
    } else if (seed == "user") {
      o.seed_policy = SeedPolicy::user;
    } else {
      sr.fail("seed", "must be \"perturbative\" or \"user\"");
    }
    o.user_seed = {sr.number("seed_re", 0.0), sr.number("seed_im", 0.0)};
    const std::string sheets = sr.text("sheets", "automatic");
    if (sheets == "automatic") {
      o.sheet_policy = SheetPolicy::automatic;
    } else if (sheets == "first_only") {
      o.sheet_policy = SheetPolicy::first_only;
    } else {
      sr.fail("sheets", "must be \"automatic\" or \"first_only\"");
    }
    sr.finish();
  }

  c.channel_window = r.integer("channel_window", c.channel_window);
  require(c.channel_window >= 0, "channel_window", "must be non-negative");
  c.mode_window = r.integer("mode_window", c.mode_window);
  require(c.mode_window >= 0, "mode_window", "must be non-negative");

  const std::string pairing = r.text("pairing", "matched");
  if (pairing == "matched") {
    c.pairing = PolePairing::matched;
  } else if (pairing == "as_printed") {
    c.pairing = PolePairing::as_printed;
  } else {
    r.fail("pairing", "must be \"matched\" or \"as_printed\"");
  }

  c.k_grid = read_grid(r.child("k_grid"), "k_grid", c.k_grid);
  c.x_grid = read_grid(r.child("x_grid"), "x_grid", c.x_grid);
  c.time = r.number("time", c.time);
  require(c.time > 0.0, "time", "must be positive");

  if (const json* o = r.child("oracle")) {
    ObjectReader orr(*o, "oracle");
    OracleSettings& s = c.oracle;
    s.box_length = orr.number("box_length", s.box_length);
    s.mode_count = orr.integer("mode_count", s.mode_count);
    s.dt = orr.number("dt", s.dt);
    s.t_end = orr.number("t_end", s.t_end);
    s.stride = orr.integer("stride", s.stride);
    s.spectrum_time = orr.number("spectrum_time", s.spectrum_time);
    orr.finish();
    if (!(s.box_length > 0.0)) orr.fail("box_length", "must be positive");
    if (s.mode_count < 64 || s.mode_count % 2 != 0) orr.fail("mode_count", "must be an even number >= 64");
    if (!(s.dt > 0.0)) orr.fail("dt", "must be positive");
    if (!(s.t_end > 0.0)) orr.fail("t_end", "must be positive");
    if (s.stride < 1) orr.fail("stride", "must be positive");
    if (!(s.spectrum_time > 0.0)) orr.fail("spectrum_time", "must be positive");
  }

  c.compare_oracle = r.boolean("compare_oracle", c.compare_oracle);
  c.threads = r.integer("threads", c.threads);
  require(c.threads >= 1, "threads", "must be at least 1");

  if (const json* s = r.child("sweep")) {
    ObjectReader sr(*s, "sweep");
    c.sweep.drive_ratio = read_grid(sr.child("A_over_omega"), "sweep.A_over_omega", c.sweep.drive_ratio);
    c.sweep.omega = read_grid(sr.child("omega"), "sweep.omega", c.sweep.omega);
    sr.finish();
    if (!(c.sweep.omega.min > 0.0)) sr.fail("omega.min", "must be positive");
  }

  r.finish();

  require(has_eps, "epsilon_d", "required");
  require(has_omega, "omega", "required");
  require(has_amplitude != has_ratio, "A", "exactly one of A and A_over_omega must be given");
  if (has_amplitude) {
    c.drive_input = DriveInput::amplitude;
    c.model.A = amplitude;
  } else {
    c.drive_input = DriveInput::ratio;
    c.model.A = ratio * c.model.omega;
  }

  try {
    c.model = make_model(c.model.epsilon_d, c.model.A, c.model.omega, c.model.lambda, c.model.k_c);
    c.solver.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace

void apply_override(json& document, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override \"" + std::string(assignment) + "\": expected key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &document;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override \"" + key + "\": empty key segment");
    if (!node->is_object()) throw ConfigError("override \"" + key + "\": parent is not an object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

RunConfig parse_config(std::string_view text) { return parse_config(text, {}); }

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return from_json(doc);
}

json config_to_json(const RunConfig& c) {
  json doc;
  doc["epsilon_d"] = c.model.epsilon_d;
  doc["omega"] = c.model.omega;
  doc["lambda"] = c.model.lambda;
  doc["k_c"] = c.model.k_c;
  if (c.drive_input == DriveInput::amplitude) {
    doc["A"] = c.model.A;
  } else {
    doc["A_over_omega"] = c.model.A / c.model.omega;
  }
  const SolverOptions& o = c.solver;
  doc["solver"] = {
      {"window", o.window},
      {"depth", o.min_depth},
      {"max_depth", o.max_depth},
      {"tolerance", o.tolerance},
      {"fraction_tolerance", o.fraction_tolerance},
      {"max_iterations", o.max_iterations},
      {"perturbation_window", o.perturbation_window},
      {"edge_decay", o.edge_decay},
      {"seed", o.seed_policy == SeedPolicy::user ? "user" : "perturbative"},
      {"seed_re", o.user_seed.real()},
      {"seed_im", o.user_seed.imag()},
      {"sheets", o.sheet_policy == SheetPolicy::first_only ? "first_only" : "automatic"},
  };
  doc["channel_window"] = c.channel_window;
  doc["mode_window"] = c.mode_window;
  doc["pairing"] = c.pairing == PolePairing::matched ? "matched" : "as_printed";
  doc["k_grid"] = grid_json(c.k_grid);
  doc["x_grid"] = grid_json(c.x_grid);
  doc["time"] = c.time;
  doc["oracle"] = {
      {"box_length", c.oracle.box_length}, {"mode_count", c.oracle.mode_count},
      {"dt", c.oracle.dt},                 {"t_end", c.oracle.t_end},
      {"stride", c.oracle.stride},         {"spectrum_time", c.oracle.spectrum_time},
  };
  doc["compare_oracle"] = c.compare_oracle;
  doc["threads"] = c.threads;
  doc["sweep"] = {{"A_over_omega", grid_json(c.sweep.drive_ratio)},
                  {"omega", grid_json(c.sweep.omega)}};
  return doc;
}

std::string serialize_config(const RunConfig& config) { return config_to_json(config).dump(2) + "\n"; }

}  // namespace fhhg

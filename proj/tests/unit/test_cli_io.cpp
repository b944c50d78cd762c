#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "fhhg/commands.hpp"
#include "fhhg/config.hpp"
#include "fhhg/dataset.hpp"

using namespace fhhg;

namespace {

const char* kMinimal = R"({"epsilon_d": 1.0, "omega": 1.2, "A_over_omega": 2.0, "lambda": 0.1})";

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fhhg_unit_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli_io") {

TEST_CASE("minimal config materializes every default") {
  const auto c = parse_config(kMinimal);
  CHECK(c.model.A == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(c.model.k_c == kTwoPi);
  CHECK(c.solver == SolverOptions{});
  CHECK(c.channel_window == 32);
  CHECK(c.oracle == OracleSettings{});
  const auto j = config_to_json(c);
  for (const char* key : {"solver", "oracle", "k_grid", "x_grid", "sweep", "mode_window", "pairing", "time", "k_c"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("lambda defaults to 0.1") {
  CHECK(parse_config(R"({"epsilon_d": 1, "omega": 1.2, "A": 2.4})").model.lambda == 0.1);
}

TEST_CASE("validation errors name the field") {
  CHECK(message_of(R"({"epsilon_d": 1, "omega": -1, "A": 1})").rfind("omega", 0) == 0);
  CHECK(message_of(R"({"epsilon_d": 1, "omega": 1, "A": 1, "lambda": -0.1})").rfind("lambda", 0) == 0);
  CHECK(message_of(R"({"epsilon_d": 1, "omega": 1, "A": 1, "solver": {"tolerance": 0}})").find("solver.tolerance") != std::string::npos);
  CHECK(message_of(R"({"epsilon_d": 1, "omega": 1, "A": 1, "k_grid": {"count": 0}})").rfind("k_grid.count", 0) == 0);
  CHECK(message_of(R"({"omega": 1, "A": 1})").rfind("epsilon_d", 0) == 0);
  CHECK(message_of(R"({"epsilon_d": 1, "omega": 1})").rfind("A", 0) == 0);
  CHECK(message_of(R"({"epsilon_d": 1, "omega": 1, "A": 1, "A_over_omega": 1})").rfind("A", 0) == 0);
  CHECK(message_of(R"({"epsilon_d": "one", "omega": 1, "A": 1})").rfind("epsilon_d", 0) == 0);
}

TEST_CASE("unknown keys are errors") {
  CHECK(message_of(R"({"epsilon_d": 1, "omega": 1, "A": 1, "lamda": 0.1})").rfind("lamda: unknown key", 0) == 0);
  CHECK(message_of(R"({"epsilon_d": 1, "omega": 1, "A": 1, "solver": {"windw": 3}})").rfind("solver.windw", 0) == 0);
}

TEST_CASE("syntax errors report the line") {
  const std::string text = "{\n  \"epsilon_d\": 1.0,\n  \"omega\": ,\n}";
  CHECK(message_of(text).rfind("line 3", 0) == 0);
}

TEST_CASE("round trip") {
  auto c = parse_config(kMinimal);
  c.solver.window = 40;
  c.solver.min_depth = 80;
  c.pairing = PolePairing::as_printed;
  c.x_grid = {-10.0, 10.0, 201};
  c.oracle.dt = 5e-4;
  c.compare_oracle = true;
  c.threads = 3;
  CHECK(parse_config(serialize_config(c)) == c);

  const auto amplitude = parse_config(R"({"epsilon_d": 1, "omega": 1.2, "A": 2.4})");
  CHECK(parse_config(serialize_config(amplitude)) == amplitude);
}

TEST_CASE("round trip over random settings") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int i = 0; i < 50; ++i) {
    RunConfig c = parse_config(kMinimal);
    c.model = make_model(u(rng) - 1.0, u(rng), u(rng), u(rng) / 10.0, kTwoPi * u(rng));
    c.drive_input = i % 2 ? DriveInput::amplitude : DriveInput::ratio;
    if (c.drive_input == DriveInput::ratio) {
      // A is re-derived as ratio * omega on parse; store the value that survives.
      c.model.A = (c.model.A / c.model.omega) * c.model.omega;
    }
    c.time = u(rng) * 10.0;
    c.solver.tolerance = u(rng) * 1e-12;
    const auto back = parse_config(serialize_config(c));
    CHECK(back == c);
  }
}

TEST_CASE("overrides") {
  const std::vector<std::string> o{"lambda=0.05", "solver.window=40", "pairing=as_printed", "oracle.dt=0.002"};
  const auto c = parse_config(kMinimal, o);
  CHECK(c.model.lambda == 0.05);
  CHECK(c.solver.window == 40);
  CHECK(c.pairing == PolePairing::as_printed);
  CHECK(c.oracle.dt == 0.002);
  const std::vector<std::string> bad{"lambda"};
  CHECK_THROWS_AS(parse_config(kMinimal, bad), ConfigError);
  const std::vector<std::string> unknown{"solver.bogus=1"};
  CHECK_THROWS_AS(parse_config(kMinimal, unknown), ConfigError);
}

TEST_CASE("dataset round trip is bit exact") {
  Dataset d{"sample", {{"x", "length"}, {"y", "1"}}, {}, {{"note", "test"}}};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) d.add_row({u(rng), u(rng) * 1e-200});
  d.add_row({std::numeric_limits<double>::denorm_min(), -0.0});
  d.add_row({std::numeric_limits<double>::max(), std::numeric_limits<double>::quiet_NaN()});
  const auto dir = scratch("roundtrip");
  const auto path = write_dataset(d, dir, 0.5);
  const auto back = read_dataset(path);
  CHECK(back.name == d.name);
  CHECK(back.columns == d.columns);
  CHECK(back.metadata == d.metadata);
  REQUIRE(back.data.size() == d.data.size());
  for (std::size_t i = 0; i < d.data.size(); ++i) {
    if (std::isnan(d.data[i])) {
      CHECK(std::isnan(back.data[i]));
    } else {
      CHECK(std::memcmp(&back.data[i], &d.data[i], sizeof(double)) == 0);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv layout") {
  Dataset d{"layout", {{"a", "1"}, {"b", "energy"}}, {}, {{"z", 1}, {"a", 2}}};
  d.add_row({0.1, 2.0});
  const std::string text = format_csv(d);
  CHECK(text ==
        "# dataset: layout\n# version: " + std::string(artifact_version()) +
            "\n# metadata: {\"a\":2,\"z\":1}\n# units: 1,energy\na,b\n0.10000000000000001,2\n");
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("empty dataset is header only") {
  Dataset d{"empty", {{"x", "1"}}, {}, {}};
  const auto dir = scratch("empty");
  const auto path = write_dataset(d, dir, 0.0);
  const auto back = read_dataset(path);
  CHECK(back.rows() == 0);
  CHECK(back.columns == d.columns);
  std::ifstream sidecar(dir / "empty.json");
  const auto meta = nlohmann::json::parse(sidecar);
  CHECK(meta.contains("wall_time_s"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("wall time stays out of the csv") {
  Dataset d{"timing", {{"x", "1"}}, {}, {}};
  d.add_row({1.0});
  const auto dir = scratch("timing");
  write_dataset(d, dir, 1.25);
  std::ifstream in(dir / "timing.csv");
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == format_csv(d));
  std::filesystem::remove_all(dir);
}

TEST_CASE("write errors surface the path") {
  Dataset d{"x", {{"x", "1"}}, {}, {}};
  CHECK_THROWS_AS(write_dataset(d, "/proc/definitely/not/writable", 0.0), IoError);
}

TEST_CASE("eigen command") {
  const auto out = run_command("eigen", parse_config(kMinimal));
  REQUIRE(out.size() == 2);
  const auto& pole = out[0];
  CHECK(pole.rows() == 1);
  CHECK(pole.at(0, pole.column_index("im_z")) < 0.0);
  CHECK(pole.at(0, pole.column_index("residual")) < 1e-12);
  CHECK(pole.at(0, pole.column_index("window")) == 32.0);
  CHECK(pole.metadata["config"]["lambda"] == 0.1);
  CHECK(out[1].rows() == 65);
  // emission weight = N sum_n R^(n) / 2 pi from the written columns.
  const auto& c = out[1];
  std::complex<double> sum_r{};
  for (std::size_t r = 0; r < c.rows(); ++r) sum_r += std::complex<double>(c.at(r, c.column_index("re_R")), c.at(r, c.column_index("im_R")));
  const std::complex<double> norm{pole.at(0, pole.column_index("re_norm")), pole.at(0, pole.column_index("im_norm"))};
  const std::complex<double> k_d{pole.at(0, pole.column_index("re_emission_weight")),
                                 pole.at(0, pole.column_index("im_emission_weight"))};
  CHECK(std::abs(k_d - norm * sum_r / (2.0 * std::numbers::pi)) < 1e-12);
}

TEST_CASE("spectrum command labels four main peaks") {
  const auto out = run_command("spectrum", parse_config(kMinimal));
  REQUIRE(out.size() == 2);
  const auto& peaks = out[1];
  const auto mcol = peaks.column_index("m");
  const auto hcol = peaks.column_index("peak_height");
  double top = 0.0;
  for (std::size_t r = 0; r < peaks.rows(); ++r) top = std::max(top, peaks.at(r, hcol));
  std::vector<int> main;
  for (std::size_t r = 0; r < peaks.rows(); ++r) {
    if (peaks.at(r, hcol) > 0.05 * top) main.push_back(static_cast<int>(peaks.at(r, mcol)));
  }
  CHECK(main == std::vector<int>{0, 1, 2, 3});
  const auto& table = out[0];
  CHECK(table.columns[0].name == "k");
  CHECK(table.column_index("S_total") == 1);
  CHECK(table.column_index("L_m3") > 0);
}

TEST_CASE("spatial command columns") {
  auto c = parse_config(kMinimal);
  c.x_grid = {-25.0, 25.0, 201};
  const auto plain = run_command("spatial", c);
  REQUIRE(plain.size() == 1);
  std::vector<std::string> names;
  for (const auto& col : plain[0].columns) names.push_back(col.name);
  CHECK(names.front() == "x");
  CHECK(names[1] == "F_resonance");
  CHECK(names.back() == "interference");
  CHECK(std::find(names.begin(), names.end(), "diag_m0") != names.end());
  CHECK(std::find(names.begin(), names.end(), "F_total") == names.end());

  c.compare_oracle = true;
  const auto with_oracle = run_command("spatial", c);
  CHECK_NOTHROW(with_oracle[0].column_index("F_total"));
  CHECK(with_oracle[0].metadata.contains("calibration"));
}

TEST_CASE("commands are independent of the thread count") {
  auto c = parse_config(kMinimal);
  c.k_grid = {0.0, 6.28, 629};
  c.x_grid = {-25.0, 25.0, 251};
  c.sweep.drive_ratio = {0.5, 3.0, 3};
  c.sweep.omega = {0.8, 1.6, 3};
  for (const char* name : {"spectrum", "spatial", "sweep"}) {
    c.threads = 1;
    const auto a = run_command(name, c);
    c.threads = 4;
    const auto b = run_command(name, c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(format_csv(a[i]) == format_csv(b[i]));
  }
}

TEST_CASE("sweep marks failed points") {
  auto c = parse_config(kMinimal);
  c.sweep.drive_ratio = {1.0, 2.0, 2};
  c.sweep.omega = {1.0, 1.2, 2};
  c.solver.max_iterations = 1;
  c.solver.seed_policy = SeedPolicy::user;
  c.solver.user_seed = {3.0, -2.0};
  const auto out = run_command("sweep", c);
  const auto status = out[0].column_index("status");
  for (std::size_t r = 0; r < out[0].rows(); ++r) {
    CHECK(out[0].at(r, status) == 0.0);
    CHECK(std::isnan(out[0].at(r, out[0].column_index("re_z"))));
  }
}

TEST_CASE("unknown command") {
  CHECK_THROWS_AS(run_command("plot", parse_config(kMinimal)), DomainError);
}

}  // TEST_SUITE

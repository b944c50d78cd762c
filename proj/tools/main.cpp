// fhhg <command> --config <file> [--out <dir>] [--override key=value ...]
//
// Exit codes: 0 success, 1 invalid input or I/O failure, 2 non-convergence.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fhhg/commands.hpp"
#include "fhhg/config.hpp"
#include "fhhg/dataset.hpp"
#include "fhhg/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fhhg::IoError("cannot open config " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet resonance analysis of a periodically driven emitter"};
  app.set_version_flag("--version", std::string(fhhg::artifact_version()));

  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  app.add_option("command", command, "eigen | spectrum | spatial | evolve | compare | sweep")
      ->required()
      ->check(CLI::IsMember(fhhg::command_names()));
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--override", overrides, "key.path=value, applied before validation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    const fhhg::RunConfig config = fhhg::parse_config(slurp(config_path), overrides);
    const auto datasets = fhhg::run_command(command, config);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& d : datasets) {
      std::cout << fhhg::write_dataset(d, out_dir, wall).string() << "\n";
    }
    return kExitOk;
  } catch (const fhhg::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

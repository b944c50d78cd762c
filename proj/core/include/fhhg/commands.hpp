#pragma once

#include <string>
#include <vector>

#include "fhhg/config.hpp"
#include "fhhg/dataset.hpp"

namespace fhhg {

/// eigen, spectrum, spatial, evolve, compare, sweep.
const std::vector<std::string>& command_names();

/// Runs one command. Errors propagate with the failing stage prefixed
/// ("solve: ...", "oracle: ..."), keeping their type.
std::vector<Dataset> run_command(const std::string& name, const RunConfig& config);

}  // namespace fhhg

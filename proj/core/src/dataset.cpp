#include "fhhg/dataset.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#ifndef FHHG_VERSION
#define FHHG_VERSION "0.0.0"
#endif

namespace fhhg {

namespace {

void append_number(std::string& out, double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  out += buffer;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

std::string strip_prefix(const std::string& line, const std::string& prefix) {
  if (line.rfind(prefix, 0) != 0) throw IoError("dataset header: expected \"" + prefix + "\"");
  return line.substr(prefix.size());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("cannot write " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

const char* artifact_version() { return FHHG_VERSION; }

void Dataset::add_row(std::span<const double> values) {
  if (values.size() != columns.size()) {
    throw std::invalid_argument("dataset " + name + ": row has " + std::to_string(values.size()) +
                                " values for " + std::to_string(columns.size()) + " columns");
  }
  data.insert(data.end(), values.begin(), values.end());
}

std::size_t Dataset::column_index(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return i;
  }
  throw std::out_of_range("dataset " + name + " has no column " + column);
}

std::string format_csv(const Dataset& d) {
  std::string out;
  out += "# dataset: " + d.name + "\n";
  out += "# version: " + std::string(artifact_version()) + "\n";
  out += "# metadata: " + d.metadata.dump() + "\n";
  out += "# units:";
  for (std::size_t i = 0; i < d.columns.size(); ++i) out += (i ? "," : " ") + d.columns[i].unit;
  out += "\n";
  for (std::size_t i = 0; i < d.columns.size(); ++i) {
    if (i) out += ",";
    out += d.columns[i].name;
  }
  out += "\n";
  const std::size_t width = d.columns.size();
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (c) out += ",";
      append_number(out, d.data[r * width + c]);
    }
    out += "\n";
  }
  return out;
}

std::filesystem::path write_dataset(const Dataset& dataset, const std::filesystem::path& dir,
                                    double wall_time_s) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto csv = dir / (dataset.name + ".csv");
  write_file(csv, format_csv(dataset));

  nlohmann::json sidecar = {{"dataset", dataset.name},
                            {"version", artifact_version()},
                            {"metadata", dataset.metadata},
                            {"rows", dataset.rows()},
                            {"wall_time_s", wall_time_s}};
  auto& cols = sidecar["columns"] = nlohmann::json::array();
  for (const auto& c : dataset.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  write_file(dir / (dataset.name + ".json"), sidecar.dump(2) + "\n");
  return csv;
}

Dataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  const auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw IoError(std::string("dataset truncated before ") + what);
  };

  Dataset d;
  next("name");
  d.name = strip_prefix(line, "# dataset: ");
  next("version");
  strip_prefix(line, "# version: ");
  next("metadata");
  d.metadata = nlohmann::json::parse(strip_prefix(line, "# metadata: "));
  next("units");
  const std::string units = strip_prefix(line, "# units:");
  next("columns");
  const auto names = split(line, ',');
  const auto unit_list = units.empty() ? std::vector<std::string>{} : split(units.substr(1), ',');
  if (!line.empty()) {
    if (unit_list.size() != names.size()) throw IoError("dataset units/columns mismatch");
    for (std::size_t i = 0; i < names.size(); ++i) d.columns.push_back({names[i], unit_list[i]});
  }

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != d.columns.size()) throw IoError("dataset row width mismatch");
    for (const auto& cell : cells) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw IoError("bad number \"" + cell + "\"");
      d.data.push_back(v);
    }
  }
  return d;
}

Dataset read_dataset(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + csv_path.string() + ": " + std::strerror(errno));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace fhhg

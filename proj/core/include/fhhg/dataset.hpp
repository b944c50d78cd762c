#pragma once

#include <filesystem>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhhg {

/// File could not be written or read; the message carries the OS error.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Column {
  std::string name;
  std::string unit;

  friend bool operator==(const Column&, const Column&) = default;
};

/// A named numeric table. Everything in `metadata` must be independent of
/// wall-clock time and thread count; it is written into the CSV header.
struct Dataset {
  std::string name;
  std::vector<Column> columns;
  std::vector<double> data;  // row-major
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
  double at(std::size_t row, std::size_t column) const { return data[row * columns.size() + column]; }
  void add_row(std::span<const double> values);
  void add_row(std::initializer_list<double> values) { add_row(std::span(values.begin(), values.size())); }
  /// Index of a column by name; throws std::out_of_range.
  std::size_t column_index(const std::string& name) const;
};

/// CSV text: '#' header lines (dataset, version, metadata, units), the column
/// names, then one line per row with 17 significant digits.
std::string format_csv(const Dataset& dataset);

/// Writes `<dir>/<name>.csv` and the sidecar `<dir>/<name>.json` (metadata
/// plus wall_time_s). Returns the CSV path.
std::filesystem::path write_dataset(const Dataset& dataset, const std::filesystem::path& dir,
                                    double wall_time_s);

Dataset parse_csv(const std::string& text);
Dataset read_dataset(const std::filesystem::path& csv_path);

const char* artifact_version();

}  // namespace fhhg

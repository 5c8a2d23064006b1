#ifndef FRACFP_FIELD_IO_HPP
#define FRACFP_FIELD_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fracfp/grid.hpp"
#include "json.hpp"

namespace fracfp {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view s);

/// One row per node: coordinates then value, preceded by a column header.
void write_field_csv(std::ostream& os, const Field& f);
Field read_field_csv(std::istream& is, const Grid& grid, double time);

/// Grid metadata, time stamp, mass and extrema.
nlohmann::json field_header(const Field& f);
Grid grid_from_header(const nlohmann::json& header);

/// Reads a field written as <stem>.csv plus <stem>.json.
Field read_field(const std::filesystem::path& csv, const std::filesystem::path& header);

std::string field_csv_string(const Field& f);

/// Collects named outputs in memory and publishes them together: each file is
/// written to a temporary sibling and renamed into place, so a failed run
/// leaves nothing behind.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content);
  void add_field(const std::string& stem, const Field& f, nlohmann::json extra = {});
  std::vector<std::filesystem::path> commit() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace fracfp

#endif  // FRACFP_FIELD_IO_HPP

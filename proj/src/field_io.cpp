#include "fracfp/field_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fracfp {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return v;
}

void write_field_csv(std::ostream& os, const Field& f) {
  static const char* names[] = {"x", "y", "z"};
  const Grid& g = f.grid();
  for (int k = 0; k < g.dim(); ++k) os << names[k] << ',';
  os << "value\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.point(i);
    for (int k = 0; k < g.dim(); ++k) os << format_double(p[k]) << ',';
    os << format_double(f[i]) << '\n';
  }
}

std::string field_csv_string(const Field& f) {
  std::ostringstream os;
  write_field_csv(os, f);
  return os.str();
}

Field read_field_csv(std::istream& is, const Grid& grid, double time) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("field CSV is empty");
  std::vector<double> values;
  values.reserve(grid.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed field CSV row");
    values.push_back(parse_double(std::string_view(line).substr(comma + 1)));
  }
  if (values.size() != grid.size())
    throw std::invalid_argument("field CSV has " + std::to_string(values.size()) + " rows, grid needs " +
                                std::to_string(grid.size()));
  return Field(grid, std::move(values), time);
}

nlohmann::json field_header(const Field& f) {
  const Grid& g = f.grid();
  return {{"dim", g.dim()},
          {"half_width", g.half_width()},
          {"n", g.n()},
          {"spacing", g.spacing()},
          {"time", f.time()},
          {"mass", f.mass()},
          {"min", f.min()},
          {"min_before_clamp", f.min_before_clamp()},
          {"max", f.max()}};
}

Grid grid_from_header(const nlohmann::json& h) {
  return Grid(h.at("dim").get<int>(), h.at("half_width").get<double>(), h.at("n").get<int>());
}

Field read_field(const std::filesystem::path& csv, const std::filesystem::path& header) {
  std::ifstream hs(header);
  if (!hs) throw std::runtime_error("cannot open " + header.string());
  const nlohmann::json h = nlohmann::json::parse(hs);
  std::ifstream cs(csv);
  if (!cs) throw std::runtime_error("cannot open " + csv.string());
  return read_field_csv(cs, grid_from_header(h), h.value("time", 0.0));
}

void OutputSet::add(const std::string& name, std::string content) {
  files_.emplace_back(name, std::move(content));
}

void OutputSet::add_field(const std::string& stem, const Field& f, nlohmann::json extra) {
  nlohmann::json h = field_header(f);
  if (extra.is_object())
    for (auto it = extra.begin(); it != extra.end(); ++it) h[it.key()] = it.value();
  add(stem + ".csv", field_csv_string(f));
  add(stem + ".json", h.dump(2) + "\n");
}

std::vector<std::filesystem::path> OutputSet::commit() const {
  namespace fs = std::filesystem;
  const bool created = !fs::exists(dir_);
  fs::create_directories(dir_);
  std::vector<fs::path> temps;
  try {
    for (const auto& [name, content] : files_) {
      const fs::path tmp = dir_ / ("." + name + ".tmp");
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      os << content;
      os.close();
      temps.push_back(tmp);
      if (!os) throw std::runtime_error("failed writing " + tmp.string());
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
    if (created) fs::remove(dir_, ec);
    throw;
  }
  std::vector<fs::path> out;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    const fs::path dest = dir_ / files_[i].first;
    fs::rename(temps[i], dest);
    out.push_back(dest);
  }
  return out;
}

}  // namespace fracfp

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fracfp/field_io.hpp"
#include "fracfp/grid.hpp"

using namespace fracfp;
namespace fs = std::filesystem;

namespace {

Field sampled(const Grid& g, auto&& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.point(i));
  return Field(g, v);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fracfp_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(1, 4.0, 64);
  CHECK(g.spacing() == 0.125);
  CHECK(g.node(0) == -4.0);
  CHECK(g.node(32) == 0.0);
  for (int i = 1; i < 64; ++i) CHECK(g.node(i) == -g.node(64 - i));
  const Grid g3(3, 1.0, 16);
  CHECK(g3.size() == 4096u);
  for (std::size_t f : {0ul, 17ul, 4095ul}) CHECK(g3.flat(g3.index(f)) == f);
  CHECK(g3.cell_volume() == doctest::Approx(std::pow(0.125, 3)));
  CHECK(g.scaled(2.0).half_width() == 8.0);
  CHECK_THROWS_AS(Grid(1, 1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(Grid(4, 1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, -1.0, 16), std::invalid_argument);
}

TEST_CASE("field mass and clamping") {
  const Grid g(1, 1.0, 16);
  std::vector<double> v(16, 0.5);
  v[3] = -0.25;
  const Field f(g, v, 0.5);
  CHECK(f.mass() == doctest::Approx((15 * 0.5 - 0.25) * g.spacing()));
  const Field c = f.clamped();
  CHECK(c.min() == 0.0);
  CHECK(c.min_before_clamp() == -0.25);
  CHECK(c.time() == 0.5);
  CHECK_THROWS(Field(g, std::vector<double>(3)));
}

TEST_CASE("cubic interpolation is exact on cubics away from the wrap") {
  const Grid g(2, 4.0, 64);
  auto cubic = [](const Point& p) { return 1 + p[0] - 0.5 * p[0] * p[0] * p[1] + p[1] * p[1] * p[1] / 7; };
  const Field f = sampled(g, cubic);
  for (const Point& p : {Point{0.11, -0.37}, Point{1.3, 2.0}, Point{-2.2, 0.05}})
    CHECK(interpolate(f, p) == doctest::Approx(cubic(p)).epsilon(1e-12));
}

TEST_CASE("resampling and restriction") {
  const Grid g(1, 8.0, 256);
  auto bump = [](const Point& p) { return std::exp(-p[0] * p[0]); };
  const Field f = sampled(g, bump);
  const Field r = resample(f, Grid(1, 4.0, 64));
  for (std::size_t i = 0; i < r.grid().size(); ++i)
    CHECK(std::abs(r[i] - bump(r.grid().point(i))) < 1e-4);
  const Field w = restrict_window(f, Grid(1, 2.0, 64));
  for (std::size_t i = 0; i < 64; ++i) CHECK(w[i] == bump(w.grid().point(i)));
  CHECK_THROWS(restrict_window(f, Grid(1, 2.0, 128)));
}

TEST_CASE("finite differences converge at fourth order") {
  auto err = [](int n, int m) {
    const Grid g(1, 3.0, n);
    const Field f = sampled(g, [](const Point& p) { return std::sin(2 * M_PI * p[0] / 6.0); });
    const Field d = finite_difference(f, m);
    const double k = 2 * M_PI / 6.0;
    double e = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.node(static_cast<int>(i));
      const double exact = m == 1 ? k * std::cos(k * x) : m == 2 ? -k * k * std::sin(k * x)
                         : m == 3 ? -k * k * k * std::cos(k * x) : k * k * k * k * std::sin(k * x);
      e = std::max(e, std::abs(d[i] - exact));
    }
    return e;
  };
  for (int m = 1; m <= 4; ++m) CHECK(std::log2(err(32, m) / err(64, m)) > 3.8);
}

TEST_CASE("field CSV round trip is exact") {
  const Grid g(2, 1.5, 16);
  const Field f = sampled(g, [](const Point& p) { return std::exp(p[0]) / 3.0 + p[1] * 1e-17; }).with_time(0.25);
  std::istringstream is(field_csv_string(f));
  const Field back = read_field_csv(is, g, 0.25);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == f[i]);
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 5e-324}) CHECK(parse_double(format_double(v)) == v);
  CHECK_THROWS(parse_double("1.0x"));
  CHECK_THROWS(parse_double(""));
}

TEST_CASE("field files with header") {
  const fs::path dir = fresh_dir("field");
  const Grid g(1, 2.0, 32);
  const Field f = sampled(g, [](const Point& p) { return 1.0 / (1.0 + p[0] * p[0]); }).with_time(1.5);
  OutputSet out(dir);
  out.add_field("u", f, {{"note", "test"}});
  CHECK(out.commit().size() == 2);
  const Field back = read_field(dir / "u.csv", dir / "u.json");
  CHECK(back.grid() == g);
  CHECK(back.time() == 1.5);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == f[i]);
  std::ifstream js(dir / "u.json");
  std::stringstream ss;
  ss << js.rdbuf();
  CHECK(ss.str().find("\"mass\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("a failing output set leaves nothing behind") {
  const fs::path dir = fresh_dir("partial");
  OutputSet out(dir);
  out.add("first.csv", "a,b\n");
  out.add("missing/second.csv", "c\n");
  CHECK_THROWS(out.commit());
  CHECK(!fs::exists(dir));
  fs::remove_all(dir);
}

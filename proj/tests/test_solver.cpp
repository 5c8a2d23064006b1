#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracfp/ou_kernel.hpp"
#include "fracfp/solver.hpp"
#include "fracfp/spectral.hpp"
#include "fracfp/stable_kernel.hpp"

using namespace fracfp;
using std::numbers::pi;

namespace {

double sup_diff(const Field& f, auto&& exact) {
  double e = 0;
  for (std::size_t i = 0; i < f.grid().size(); ++i) e = std::max(e, std::abs(f[i] - exact(f.grid().point(i))));
  return e;
}

// Uniform law on [-1, 1] pushed through the Cauchy OU flow.
double cauchy_box(double t, double x) {
  const double s = 1 - std::exp(-t), c = std::exp(-t);
  return std::exp(t) / (2 * pi) * (std::atan((x + c) / s) - std::atan((x - c) / s));
}

}  // namespace

TEST_CASE("gaussian data under the gaussian flow") {
  const StableLaw law(2.0, 1);
  const double mu = 1.0, sigma = 0.5;
  for (double t : {0.5, 1.0, 2.0}) {
    const Field u = solve_on_window(law, InitialData::gaussian({mu}, sigma), t, Grid(1, 8.0, 512));
    const double m = std::exp(-t) * mu, v = sigma * sigma * std::exp(-2 * t) + 1 - std::exp(-2 * t);
    CHECK(sup_diff(u, [&](const Point& p) { return std::exp(-std::pow(p[0] - m, 2) / (2 * v)) / std::sqrt(2 * pi * v); }) < 1e-5);
  }
}

TEST_CASE("two-dimensional gaussian flow") {
  const StableLaw law(2.0, 2);
  const double t = 0.7, sigma = 0.4;
  const Field u = solve_on_window(law, InitialData::gaussian({0.5, -0.5}, sigma), t, Grid(2, 6.0, 128));
  const double v = sigma * sigma * std::exp(-2 * t) + 1 - std::exp(-2 * t), c = std::exp(-t) * 0.5;
  CHECK(sup_diff(u, [&](const Point& p) {
          return std::exp(-(std::pow(p[0] - c, 2) + std::pow(p[1] + c, 2)) / (2 * v)) / (2 * pi * v);
        }) < 1e-6);
  CHECK(u.mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("box data under the cauchy flow converges at second order") {
  const StableLaw law(1.0, 1);
  const InitialData box = InitialData::box({-1.0}, {1.0});
  auto err = [&](int n) {
    const Grid window(1, 256.0, n);
    const Field u = solve_on_window(law, box, 1.0, window);
    double e = 0;
    for (double x = -3; x <= 3; x += 0.125) e = std::max(e, std::abs(interpolate(u, {x}) - cauchy_box(1.0, x)));
    return e;
  };
  const double coarse = err(8192), fine = err(16384);
  CHECK(coarse < 1e-3);
  CHECK(fine < coarse / 3);
}

TEST_CASE("mass, positivity and flow composition") {
  for (double alpha : {0.6, 1.0, 1.5, 2.0}) {
    const StableLaw law(alpha, 1);
    const Grid in(1, 40.0, 1024);
    const Field f = InitialData::box({-1.0}, {1.0}).discretize(in);
    const Field one = ou_solve(law, f, 1.0);
    CHECK(one.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.min_before_clamp() >= -kClampEpsilon);
    CHECK(one.grid().half_width() == doctest::Approx(40.0 * std::exp(-1.0)));
    const Field two = ou_solve(law, ou_solve(law, f, 0.25), 0.75);
    for (std::size_t i = 0; i < in.size(); ++i) CHECK(std::abs(two[i] - one[i]) < 1e-14);
  }
}

TEST_CASE("spectral heat step matches the closed-form kernel") {
  const StableLaw law(1.0, 1);
  const Grid g(1, 512.0, 8192);
  const Field k = periodic_heat_kernel(law, 0.8, g);
  for (double x : {0.0, 0.5, 3.0}) CHECK(interpolate(k, {x}) == doctest::Approx(0.8 / (pi * (0.64 + x * x))).epsilon(1e-5));
  const Field f = InitialData::gaussian({0.0}, 1.0).discretize(Grid(1, 16.0, 256));
  const Field same = heat_propagate(law, f, 0.0);
  for (std::size_t i = 0; i < f.grid().size(); ++i) CHECK(same[i] == f[i]);
  CHECK_THROWS(heat_propagate(law, f, -0.1));
  const Field c = cell_averages(InitialData::uniform(1, 16.0).discretize(Grid(1, 16.0, 256)));
  CHECK(c.min() == doctest::Approx(c.max()));
}

TEST_CASE("stationary data is a fixed point") {
  for (double alpha : {0.6, 1.5}) {
    const StableLaw law(alpha, 1);
    const Grid g(1, 128.0, 8192);
    const InitialData st = InitialData::stationary(law);
    const Field ref = st.discretize(g);
    for (double t : {0.5, 5.0}) CHECK(sup_diff(solve_on_window(law, st, t, g), [&](const Point& p) {
                                         return ref[g.flat({static_cast<int>(std::lround(p[0] / g.spacing())) + g.n() / 2, 0, 0})];
                                       }) < 1e-12);
  }
}

TEST_CASE("direct contraction agrees with the spectral route") {
  const StableLaw law(1.5, 1);
  const Grid out(1, 64.0, 4096);
  const Field f = InitialData::box({-1.0}, {1.0}).discretize(out.scaled(std::exp(1.0)));
  const Field u = ou_solve(law, f, 1.0);
  for (double x : {-2.0, 0.0, 0.3, 1.7})
    CHECK(std::abs(interpolate(u, {x}) - ou_solve_direct(law, f, 1.0, {x})) < 1e-4);
}

TEST_CASE("window rules") {
  const StableLaw law(1.0, 1);
  const Field f = InitialData::box({-1.0}, {1.0}).discretize(Grid(1, 4.0, 128));
  CHECK_THROWS_AS(ou_solve(law, f, 1.0, Grid(1, 4.0, 128)), ConfigError);
  CHECK_NOTHROW(ou_solve(law, f, 1.0, Grid(1, 1.4, 128)));

  const InitialData box = InitialData::box({-1.0}, {1.0});
  const DomainPlan small = plan_domain(law, box, 1.0, 2.0, 64, 0.05);
  CHECK(small.tail_mass > 0.05);
  CHECK_THROWS_AS(require_tail_budget(small), ConfigError);
  const DomainPlan fixed = plan_domain(law, box, 1.0, small.suggested_half_width, 64, 0.05);
  CHECK(fixed.tail_mass <= 0.05 * (1 + 1e-9));
  CHECK_NOTHROW(require_tail_budget(plan_domain(law, box, 1.0, 16.0, 512, 0.05)));
  // The plan bound is the independent tail integral beyond L - e^{-t} R0.
  CHECK(small.tail_mass == doctest::Approx(tail_mass_bound(law, effective_time(1.0, 1.0), 2.0 - std::exp(-1.0))));
}

TEST_CASE("pde residual is second order in the time probe") {
  const StableLaw law(1.5, 1);
  const InitialData g = InitialData::gaussian({0.5}, 0.5);
  const Grid window(1, 256.0, 8192);
  const double r1 = pde_residual(law, g, window, 1.0, 0.1).residual;
  const double r2 = pde_residual(law, g, window, 1.0, 0.05).residual;
  CHECK(std::log2(r1 / r2) > 1.8);
  const ResidualReport st = pde_residual(law, InitialData::stationary(law), window, 1.0, 1e-3);
  CHECK(st.time_term < 1e-10);
  CHECK(st.spatial_term < 1e-4);
}

TEST_CASE("initial continuity probe") {
  const StableLaw law(1.0, 1);
  const InitialData box = InitialData::box({-1.0}, {1.0});
  const Grid g(1, 2.0, 256);
  const ContinuityReport r = initial_continuity_check(law, box, g, {0.0});
  CHECK(r.k.front() == 3);
  CHECK(r.k.back() == 10);
  CHECK(r.reference == doctest::Approx(0.5));
  CHECK(r.monotone);
  CHECK(r.deviation.back() < 1e-3);
  CHECK_THROWS_AS(initial_continuity_check(law, box, g, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(initial_continuity_check(law, box, g, {-1.0}), std::invalid_argument);
}

TEST_CASE("smoothing degrades as t approaches zero") {
  const StableLaw law(0.6, 1);
  const InitialData box = InitialData::box({-0.25}, {0.25});
  const Grid window(1, 1.0, 512);
  const auto late = smoothness_probe(law, box, 0.5, {2}, window);
  const auto early = smoothness_probe(law, box, 0.05, {2}, window);
  CHECK(early[0].coarse_sup > 10 * late[0].coarse_sup);
  CHECK(late[0].stable);
}

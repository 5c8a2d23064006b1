#include <cmath>

#include "doctest.h"
#include "fracfp/initial_data.hpp"
#include "fracfp/ou_kernel.hpp"

using namespace fracfp;

TEST_CASE("box density and continuity set") {
  const InitialData b = InitialData::box({-1.0, 0.0}, {1.0, 0.5});
  CHECK(b.kind() == "indicator-box");
  CHECK(b.value({0.0, 0.25}) == doctest::Approx(1.0));
  CHECK(b.value({2.0, 0.25}) == 0.0);
  CHECK(b.is_continuity_point({0.0, 0.25}));
  CHECK(b.is_continuity_point({3.0, 3.0}));
  CHECK_FALSE(b.is_continuity_point({1.0, 0.25}));
  CHECK_FALSE(b.is_continuity_point({0.3, 0.0}));
  CHECK(*b.support_radius() == doctest::Approx(std::sqrt(1.25)));
  CHECK_THROWS(InitialData::box({1.0}, {-1.0}));
}

TEST_CASE("gaussian mixture") {
  const InitialData g = InitialData::gaussian_mixture({{1.0, {-1.0}, 0.5}, {3.0, {2.0}, 1.0}});
  const double x = 0.3;
  const double expect = 0.25 * std::exp(-0.5 * std::pow((x + 1) / 0.5, 2)) / (0.5 * std::sqrt(2 * M_PI)) +
                        0.75 * std::exp(-0.5 * std::pow(x - 2, 2)) / std::sqrt(2 * M_PI);
  CHECK(g.value({x}) == doctest::Approx(expect).epsilon(1e-14));
  CHECK_FALSE(g.support_radius().has_value());
  CHECK(g.is_continuity_point({1.0}));
  CHECK_THROWS(InitialData::gaussian({0.0}, -1.0));
}

TEST_CASE("discretization carries unit mass") {
  const Grid g(1, 4.0, 64);
  const Field box = InitialData::box({-1.3}, {0.7}).discretize(g);
  CHECK(box.mass() == doctest::Approx(1.0).epsilon(1e-14));
  // Cell averages: the cell holding the edge gets the covered fraction.
  const int i = 32 + static_cast<int>(std::lround(0.7 / g.spacing()));
  CHECK(box[i] > 0.0);
  CHECK(box[i] < box[32]);
  const Field gs = InitialData::gaussian({0.5}, 0.3).discretize(g);
  CHECK(gs.mass() == doctest::Approx(1.0).epsilon(1e-14));
  const Field un = InitialData::uniform(1, 4.0).discretize(g);
  CHECK(un.min() == doctest::Approx(un.max()));
}

TEST_CASE("stationary data is the periodized invariant density") {
  const StableLaw law(1.5, 1);
  const Grid g(1, 64.0, 4096);
  const Field s = InitialData::stationary(law).discretize(g);
  CHECK(s.mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (double x : {0.0, 0.5, 2.0})
    CHECK(interpolate(s, {x}) == doctest::Approx(stationary_density(law, {x}, 1e-12)).epsilon(1e-4));
  CHECK_FALSE(InitialData::stationary(law).renormalized_on_grid());
}

TEST_CASE("json round trip") {
  for (const InitialData& d : {InitialData::box({-1.0}, {2.0}), InitialData::gaussian({0.1, 0.2}, 0.4),
                               InitialData::uniform(3, 2.0), InitialData::stationary(StableLaw(0.8, 2))}) {
    const InitialData back = InitialData::from_json(d.to_json());
    CHECK(back.kind() == d.kind());
    CHECK(back.to_json() == d.to_json());
  }
  const Grid g(1, 1.0, 16);
  const InitialData s = InitialData::samples(Field(g, std::vector<double>(16, 0.5)));
  CHECK(InitialData::from_json(s.to_json()).to_json() == s.to_json());
  CHECK_THROWS(InitialData::from_json({{"kind", "mystery"}}));
}

TEST_CASE("custom samples are validated and renormalized") {
  const Grid g(1, 2.0, 32);
  std::vector<double> v(32, 1.0);
  v[5] = -3.0;
  CHECK_THROWS(InitialData::samples(Field(g, v)));
  v[5] = 4.0;
  const Field f = InitialData::samples(Field(g, v)).discretize(Grid(1, 2.0, 64));
  CHECK(f.min() >= 0.0);
  CHECK(f.mass() == doctest::Approx(1.0).epsilon(1e-14));
}

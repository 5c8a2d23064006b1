#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "fracfp/mc_oracle.hpp"
#include "fracfp/ou_kernel.hpp"
#include "fracfp/solver.hpp"

using namespace fracfp;
using std::numbers::pi;

TEST_CASE("cauchy sampler quartiles") {
  StreamRng rng({5, 0});
  const StableLaw law(1.0, 1);
  const int n = 200000;
  int inside = 0;
  for (int i = 0; i < n; ++i) inside += std::abs(sample_standard_stable(law, rng)[0]) < 1.0;
  // P(|C| < 1) = 1/2 for the standard Cauchy law.
  CHECK(std::abs(inside / double(n) - 0.5) < 4 * std::sqrt(0.25 / n));
}

TEST_CASE("positive stable laplace transform") {
  // E exp(-l S) = exp(-l^beta).
  StreamRng rng({9, 0});
  for (double beta : {0.3, 0.75}) {
    const int n = 200000;
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += std::exp(-2.0 * sample_positive_stable(beta, rng));
    CHECK(acc / n == doctest::Approx(std::exp(-std::pow(2.0, beta))).epsilon(0.01));
  }
  CHECK_THROWS(sample_positive_stable(1.5, rng));
}

TEST_CASE("gaussian OU variance recursion") {
  // Var X_t = sigma0^2 e^{-2t} + (1 - e^{-2t}) at alpha = 2.
  const StableLaw law(2.0, 1);
  const double sigma = 0.5, t = 0.8;
  const Ensemble e = simulate_ensemble(law, InitialData::gaussian({1.0}, sigma), t, 200000, 3);
  double m = 0, v = 0;
  for (double x : e.positions) m += x;
  m /= e.n;
  for (double x : e.positions) v += (x - m) * (x - m);
  v /= e.n - 1;
  CHECK(m == doctest::Approx(std::exp(-t)).epsilon(0.01));
  CHECK(v == doctest::Approx(sigma * sigma * std::exp(-2 * t) + 1 - std::exp(-2 * t)).epsilon(0.01));
}

TEST_CASE("two exact steps match one step in law") {
  const StableLaw law(1.5, 1);
  const InitialData box = InitialData::box({-1.0}, {1.0});
  const std::size_t n = 50000;
  const Ensemble one = simulate_ensemble(law, box, 1.0, n, 11);
  const Ensemble half = simulate_ensemble(law, box, 0.4, n, 12);
  StreamRng rng({13, 0});
  std::vector<double> two(n);
  for (std::size_t i = 0; i < n; ++i) two[i] = ou_step(half.position(i), 0.6, law, rng)[0];
  CHECK(ks_statistic(one.positions, two) < ks_critical_5pct(n, n));
  // A wrong horizon is detected.
  const Ensemble other = simulate_ensemble(law, box, 0.2, n, 14);
  CHECK(ks_statistic(one.positions, other.positions) > ks_critical_5pct(n, n));
}

TEST_CASE("ensembles do not depend on the worker count") {
  const StableLaw law(0.8, 2);
  const InitialData box = InitialData::box({-1.0, -1.0}, {1.0, 1.0});
  const Ensemble a = simulate_ensemble(law, box, 0.5, 30000, 21, 1);
  const Ensemble b = simulate_ensemble(law, box, 0.5, 30000, 21, 4);
  CHECK(a.positions == b.positions);
  std::ostringstream os;
  write_ensemble_csv(os, a);
  std::istringstream is(os.str());
  const Ensemble c = read_ensemble_csv(is);
  CHECK(c.positions == a.positions);
  CHECK(c.seed == 21u);
  CHECK(c.dim == 2);
  CHECK_THROWS(simulate_ensemble(law, box, 0.5, 0, 1));
}

TEST_CASE("t = 0 histogram reproduces the initial density") {
  const StableLaw law(1.0, 1);
  const std::size_t n = 400000;
  const Ensemble e = simulate_ensemble(law, InitialData::uniform(1, 2.0), 0.0, n, 4);
  const Grid g(1, 4.0, 64);
  const Histogram h = empirical_density(e, g);
  CHECK(h.outside == 0u);
  CHECK(h.density.mass() == doctest::Approx(1.0));
  for (double x : {-1.5, 0.0, 1.0})
    CHECK(interpolate(h.density, {x}) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("histogram bookkeeping") {
  Ensemble e{1, 1.0, 1.0, 0, 4, {0.0, 0.05, 3.0, -10.0}};
  const Grid g(1, 1.0, 16);
  const Histogram h = empirical_density(e, g);
  CHECK(h.outside == 2u);
  CHECK(h.outside_mass == 0.5);
  CHECK(h.warning);
  CHECK(h.density.mass() == doctest::Approx(0.5));
  CHECK(h.density[8] == doctest::Approx(2.0 / (4 * g.spacing())));
}

TEST_CASE("histogram agrees with the solver") {
  const StableLaw law(1.5, 1);
  const InitialData box = InitialData::box({-1.0}, {1.0});
  const std::size_t n = 300000;
  const Grid g(1, 10.0, 256);
  const Histogram h = empirical_density(simulate_ensemble(law, box, 1.0, n, 42, 2), g);
  const Field model = restrict_window(cell_averages(solve_on_window(law, box, 1.0, Grid(1, 40.0, 1024))), g);
  const Comparison c = compare_densities(h.density, model, binomial_errors(model, n));
  CHECK(c.pass);
  CHECK(c.worst_z < 5.0);
  // A shifted model is rejected.
  const Field shifted = restrict_window(cell_averages(solve_on_window(law, InitialData::box({-0.8}, {1.2}), 1.0, Grid(1, 40.0, 1024))), g);
  CHECK_FALSE(compare_densities(h.density, shifted, binomial_errors(shifted, n)).pass);
}

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracfp/ou_kernel.hpp"
#include "fracfp/stable_kernel.hpp"

using namespace fracfp;
using std::numbers::pi;

TEST_CASE("time change") {
  for (double alpha : {0.6, 1.0, 2.0})
    for (double t : {1e-8, 0.3, 5.0}) {
      CHECK(time_dilation(alpha, t) == doctest::Approx((std::exp(alpha * t) - 1) / alpha).epsilon(1e-12));
      CHECK(effective_time(alpha, t) == doctest::Approx((1 - std::exp(-alpha * t)) / alpha).epsilon(1e-12));
      const TimeChange tc = TimeChange::at(alpha, t);
      CHECK(tc.dilated == doctest::Approx(std::exp(alpha * t) * tc.effective).epsilon(1e-14));
    }
  CHECK(effective_time(1.5, 1e3) == doctest::Approx(1 / 1.5));
  CHECK_THROWS_AS(TimeChange::at(1.0, 0.0), std::invalid_argument);
  // s(t1 + t2) = s(t2) + e^{-alpha t2} s(t1): the semigroup property in time.
  const double a = 1.3, t1 = 0.4, t2 = 1.1;
  CHECK(effective_time(a, t1 + t2) ==
        doctest::Approx(effective_time(a, t2) + std::exp(-a * t2) * effective_time(a, t1)).epsilon(1e-14));
}

TEST_CASE("gaussian OU transition") {
  const StableLaw law(2.0, 1);
  for (double t : {0.1, 1.0, 3.0})
    for (double y : {-1.0, 0.5})
      for (double x : {-2.0, 0.0, 0.7}) {
        const double mean = std::exp(-t) * y, var = 1 - std::exp(-2 * t);
        const double expect = std::exp(-(x - mean) * (x - mean) / (2 * var)) / std::sqrt(2 * pi * var);
        CHECK(ou_kernel(law, {t, {x}, {y}}) == doctest::Approx(expect).epsilon(1e-12));
      }
}

TEST_CASE("cauchy OU transition in three dimensions") {
  const StableLaw law(1.0, 3);
  const double t = 0.8;
  const Point x{0.3, -0.2, 1.0}, y{1.0, 0.0, -0.5};
  const double s = 1 - std::exp(-t);
  double r2 = 0;
  for (int k = 0; k < 3; ++k) r2 += std::pow(x[k] - std::exp(-t) * y[k], 2);
  CHECK(ou_kernel(law, {t, x, y}) == doctest::Approx(s / (pi * pi * std::pow(s * s + r2, 2))).epsilon(1e-12));
}

TEST_CASE("both routes agree and the dispatcher switches") {
  for (double alpha : {0.6, 1.5})
    for (double t : {0.01, 0.5, 3.0, 10.0}) {
      const StableLaw law(alpha, 1);
      const OUKernelQuery q{t, {0.4}, {-1.1}, 1e-11};
      CHECK(std::abs(ou_kernel_dilated(law, q) - ou_kernel_reduced(law, q)) < 2e-11);
    }
  const StableLaw law(2.0, 1);
  const double late = dilation_switch_time(2.0) + 5.0;
  CHECK_THROWS(ou_kernel_dilated(law, {late, {0.1}, {0.2}}));
  CHECK(std::isfinite(ou_kernel(law, {late, {0.1}, {0.2}})));
  CHECK(ou_kernel(law, {late, {0.1}, {0.2}}) == doctest::Approx(stationary_density(law, {0.1}, 1e-12)).epsilon(1e-8));
}

TEST_CASE("invariant density") {
  for (double alpha : {0.6, 1.0, 1.5}) {
    const StableLaw law(alpha, 1);
    CHECK(stationary_density(law, {0.7}, 1e-12) == doctest::Approx(heat_kernel(law, {1 / alpha, {0.7}, 1e-12})));
    CHECK(ou_kernel(law, {40.0, {0.7}, {3.0}, 1e-12}) == doctest::Approx(stationary_density(law, {0.7}, 1e-12)).epsilon(1e-9));
  }
}

TEST_CASE("Chapman-Kolmogorov by quadrature") {
  // int p(t2, x, z) p(t1, z, y) dz = p(t1 + t2, x, y), Gaussian case on a fine trapezoid.
  const StableLaw law(2.0, 1);
  const double t1 = 0.3, t2 = 0.5, x = 0.4, y = -0.8;
  double acc = 0.0;
  const double h = 1e-3;
  for (double z = -12; z <= 12; z += h) acc += ou_kernel(law, {t2, {x}, {z}}) * ou_kernel(law, {t1, {z}, {y}});
  CHECK(acc * h == doctest::Approx(ou_kernel(law, {t1 + t2, {x}, {y}})).epsilon(1e-10));
}

TEST_CASE("gradient against finite differences of the kernel") {
  for (double alpha : {0.6, 1.0, 1.5, 2.0})
    for (int m = 1; m <= 2; ++m) {
      const StableLaw law(alpha, 1);
      const double t = 0.5, x = 0.2, y = 0.1, h = 1e-3;
      auto k = [&](double xx) { return ou_kernel(law, {t, {xx}, {y}, 1e-13}); };
      const double fd = m == 1 ? (k(x + h) - k(x - h)) / (2 * h) : (k(x + h) - 2 * k(x) + k(x - h)) / (h * h);
      const double g = ou_kernel_gradient(law, {t, {x}, {y}, 1e-12}, m);
      CHECK(g == doctest::Approx(fd).epsilon(1e-4));
      CHECK(g == doctest::Approx(ou_kernel_gradient_reduced(law, {t, {x}, {y}, 1e-12}, m)).epsilon(1e-9));
    }
  // d/dx e^{-x^2/(2 v)} / sqrt(2 pi v) at the mean vanishes.
  CHECK(std::abs(ou_kernel_gradient(StableLaw(2.0, 1), {0.7, {std::exp(-0.7) * 0.4}, {0.4}}, 1)) < 1e-14);
}

TEST_CASE("query validation") {
  const StableLaw law(1.5, 2);
  CHECK_THROWS(ou_kernel(law, {1.0, {0.1}, {0.1, 0.2}}));
  CHECK_THROWS(ou_kernel(law, {-1.0, {0.1, 0.0}, {0.1, 0.2}}));
  CHECK_THROWS(ou_kernel_gradient(StableLaw(1.5, 1), {1.0, {0.1}, {0.2}}, 3));
}

#include "fracfp/stable_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fracfp/radial_quadrature.hpp"

namespace fracfp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_quadrature_alpha(double alpha) {
  if (alpha < kMinQuadratureAlpha)
    throw std::invalid_argument("quadrature supports alpha >= 0.3, got " + std::to_string(alpha));
}

// c_D = 1 / (2^{D-1} pi^{D/2} Gamma(D/2))
double inversion_constant(int D) {
  return 1.0 / (std::pow(2.0, D - 1) * std::pow(kPi, 0.5 * D) * std::tgamma(0.5 * D));
}

double radial_density_quadrature(int D, double alpha, double tau, double r, double tol) {
  const double c = inversion_constant(D);
  const quad::RadialIntegrand f{alpha, tau, static_cast<double>(D - 1),
                                quad::Oscillator::bessel(0.5 * D - 1.0)};
  return c * quad::integrate(f, r, tol / c).value;
}

double radial_density_closed(int D, double alpha, double t, double r) {
  if (alpha == 2.0) return std::pow(4.0 * kPi * t, -0.5 * D) * std::exp(-r * r / (4.0 * t));
  const double half = 0.5 * (D + 1);
  const double c = std::tgamma(half) / std::pow(kPi, half);
  return c * t / std::pow(t * t + r * r, half);
}

double clamp_density(double v, double tol) { return (v < 0.0 && v > -tol) ? 0.0 : v; }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double ladder_derivative(int d, double alpha, double tau, const Point& x, int m, double tol) {
  const double r = x.norm();
  const double x1 = x[0];
  const int terms = m / 2 + 1;
  double sum = 0.0;
  for (int n = 0; n <= m / 2; ++n) {
    const double coef = factorial(m) / (std::pow(2.0, n) * factorial(n) * factorial(m - 2 * n));
    const double pw = (m - 2 * n == 0) ? 1.0 : std::pow(x1, m - 2 * n);
    if (pw == 0.0) continue;
    const double scale = coef * pw * std::pow(-2.0 * kPi, m - n);
    const double term_tol = tol / (terms * std::abs(scale));
    sum += scale * radial_density(d + 2 * (m - n), alpha, tau, r, term_tol);
  }
  return sum;
}

double unit_derivative(const StableLaw& law, const Point& z, int m, double tol) {
  if (law.dim() == 1 && !law.has_closed_form()) {
    const double zz = z[0];
    const double sgn = (zz < 0.0 && m % 2 == 1) ? -1.0 : 1.0;
    const quad::RadialIntegrand f{law.alpha(), 1.0, static_cast<double>(m),
                                  quad::Oscillator::cosine(0.5 * m * kPi)};
    return sgn * quad::integrate(f, std::abs(zz), tol * kPi).value / kPi;
  }
  return ladder_derivative(law.dim(), law.alpha(), 1.0, z, m, tol);
}

}  // namespace

double radial_density(int D, double alpha, double t, double r, double tol) {
  if (D < 1) throw std::invalid_argument("radial dimension must be positive");
  if (alpha == 1.0 || alpha == 2.0) return radial_density_closed(D, alpha, t, r);
  require_quadrature_alpha(alpha);
  return radial_density_quadrature(D, alpha, t, r, tol);
}

double heat_kernel_closed_form(const StableLaw& law, double t, const Point& x) {
  if (!law.has_closed_form())
    throw std::invalid_argument("closed form exists only for alpha = 1 and alpha = 2");
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  return radial_density_closed(law.dim(), law.alpha(), t, x.norm());
}

double heat_kernel_quadrature(const StableLaw& law, double t, const Point& x, double tol) {
  require_quadrature_alpha(law.alpha());
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  return clamp_density(radial_density_quadrature(law.dim(), law.alpha(), t, x.norm(), tol), tol);
}

SelfSimilarReduction self_similar_reduce(const StableLaw& law, double t, const Point& x) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  if (t == 1.0) return {x, 1.0};
  const double a = law.alpha();
  return {x * std::pow(t, -1.0 / a), std::pow(t, -law.dim() / a)};
}

double heat_kernel(const StableLaw& law, const KernelQuery& q, KernelMethod method) {
  q.validate(law);
  if (method == KernelMethod::automatic)
    method = law.has_closed_form() ? KernelMethod::closed_form : KernelMethod::quadrature;
  if (method == KernelMethod::closed_form) return heat_kernel_closed_form(law, q.t, q.x);

  require_quadrature_alpha(law.alpha());
  const SelfSimilarReduction red = self_similar_reduce(law, q.t, q.x);
  const double unit =
      radial_density_quadrature(law.dim(), law.alpha(), 1.0, red.x.norm(), q.tol / red.factor);
  return clamp_density(red.factor * unit, q.tol);
}

BoundValue sharp_bound(const StableLaw& law, double t, double r) {
  if (!(t > 0.0)) throw std::invalid_argument("bound time must be positive");
  if (r < 0.0) throw std::invalid_argument("distance must be nonnegative");
  const double d = law.dim();
  const double a = law.alpha();
  const double bulk = std::pow(t, -d / a);
  if (r == 0.0) return {bulk, BoundBranch::bulk};
  const double tail = t / std::pow(r, d + a);
  if (std::abs(tail - bulk) <= 1e-12 * std::max(tail, bulk)) return {bulk, BoundBranch::crossover};
  return tail < bulk ? BoundValue{tail, BoundBranch::tail} : BoundValue{bulk, BoundBranch::bulk};
}

double derivative_bound(const StableLaw& law, int m, double t, double r) {
  if (m < 0) throw std::invalid_argument("derivative order must be nonnegative");
  if (!(t > 0.0)) throw std::invalid_argument("bound time must be positive");
  if (r < 0.0) throw std::invalid_argument("distance must be nonnegative");
  if (r == 0.0 && m % 2 == 1)
    throw std::invalid_argument("odd-order derivative bound is undefined at r = 0");
  const double d = law.dim();
  const double a = law.alpha();
  double sum = 0.0;
  for (int n = 0; n <= m / 2; ++n) {
    const int k = m - n;
    const double bulk = std::pow(t, -(d + 2.0 * k) / a);
    if (r == 0.0) {
      if (m - 2 * n == 0) sum += bulk;
      continue;
    }
    const double tail = t / std::pow(r, d + a + 2.0 * k);
    sum += std::pow(r, m - 2 * n) * std::min(tail, bulk);
  }
  return sum;
}

double kernel_derivative(const StableLaw& law, double t, const Point& x, int m, double tol) {
  if (m < 0 || m > 4) throw std::invalid_argument("derivative order must be in 0..4");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (m == 0) return heat_kernel(law, {t, x, tol});
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  if (!law.has_closed_form()) require_quadrature_alpha(law.alpha());
  const double a = law.alpha();
  const Point z = x * std::pow(t, -1.0 / a);
  const double factor = std::pow(t, -(law.dim() + m) / a);
  return factor * unit_derivative(law, z, m, tol / factor);
}

double kernel_derivative_fd(const StableLaw& law, double t, const Point& x, int m, double tol) {
  if (m < 1 || m > 4) throw std::invalid_argument("finite differences need m in 1..4");
  const double a = law.alpha();
  const double scale = std::max(std::pow(t, 1.0 / a), 0.25 * std::abs(x[0]));
  const double h0 = 0.08 * scale;
  const double peak = std::pow(t, -law.dim() / a);

  // Second-order central stencils, offsets -2..2.
  static constexpr std::array<std::array<double, 5>, 4> stencil{{
      {-0.0, -0.5, 0.0, 0.5, 0.0},
      {0.0, 1.0, -2.0, 1.0, 0.0},
      {-0.5, 1.0, 0.0, -1.0, 0.5},
      {1.0, -4.0, 6.0, -4.0, 1.0},
  }};
  const auto& w = stencil[m - 1];

  auto central = [&](double h) {
    const double hm = std::pow(h, m);
    const double f_tol = std::max(1e-3 * tol * hm, 1e-15 * peak);
    double acc = 0.0;
    for (int i = -2; i <= 2; ++i) {
      if (w[i + 2] == 0.0) continue;
      Point xi = x;
      xi[0] += i * h;
      acc += w[i + 2] * heat_kernel(law, {t, xi, f_tol});
    }
    return acc / hm;
  };

  const double d0 = central(h0);
  const double d1 = central(0.5 * h0);
  const double d2 = central(0.25 * h0);
  const double r1 = (4.0 * d1 - d0) / 3.0;
  const double r2 = (4.0 * d2 - d1) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

CheckedDerivative kernel_derivative_checked(const StableLaw& law, double t, const Point& x, int m,
                                            double tol) {
  const double v = kernel_derivative(law, t, x, m, tol);
  const double fd = kernel_derivative_fd(law, t, x, m, tol);
  if (std::abs(v - fd) > 10.0 * tol)
    throw NonConvergence("kernel derivative: quadrature and finite differences disagree",
                         std::abs(v - fd));
  return {v, fd};
}

double heat_kernel_cdf(const StableLaw& law, double t, double x, double tol) {
  if (law.dim() != 1) throw std::invalid_argument("distribution function is one-dimensional");
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  if (law.is_gaussian()) return 0.5 * boost::math::erfc(-x / (2.0 * std::sqrt(t)));
  if (law.is_cauchy()) return 0.5 + std::atan(x / t) / kPi;
  require_quadrature_alpha(law.alpha());
  const double z = x * std::pow(t, -1.0 / law.alpha());
  if (z == 0.0) return 0.5;
  const double az = std::abs(z);
  const quad::RadialIntegrand f{law.alpha(), 1.0, 0.0, quad::Oscillator::bessel(0.5)};
  const double half = az / kPi * quad::integrate(f, az, tol * kPi / az).value;
  return z > 0.0 ? 0.5 + half : 0.5 - half;
}

double tail_constant(const StableLaw& law) {
  const double a = law.alpha();
  if (law.is_gaussian()) return 0.0;
  const double d = law.dim();
  return a * std::pow(2.0, a - 1.0) * std::pow(kPi, -0.5 * d - 1.0) * std::sin(0.5 * kPi * a) *
         std::tgamma(0.5 * (d + a)) * std::tgamma(0.5 * a);
}

double tail_mass_bound(const StableLaw& law, double t, double radius) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  if (!(radius > 0.0)) return 1.0;
  const int d = law.dim();
  if (law.is_gaussian()) return boost::math::gamma_q(0.5 * d, radius * radius / (4.0 * t));
  static constexpr std::array<double, 3> sphere{2.0, 2.0 * kPi, 4.0 * kPi};
  const double a = law.alpha();
  return std::min(1.0, tail_constant(law) * sphere[d - 1] * t * std::pow(radius, -a) / a);
}

}  // namespace fracfp

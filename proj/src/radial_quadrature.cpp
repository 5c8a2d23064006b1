#include "fracfp/radial_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fracfp/stable_law.hpp"

namespace fracfp::quad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Relative weight mass left beyond the cutoff radius.
constexpr double kTailFraction = 1e-22;

bool is_half(double nu, double target) { return std::abs(nu - target) < 1e-14; }

struct Piece {
  double value;
  double error;
};

// Adaptive Gauss-Kronrod (10/21) with an absolute error target.
template <class F>
Piece gk21(const F& f, double a, double b, double abs_tol, int depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fc = f(mid);
  double kron = fc * wk[0];
  double gauss = 0.0;
  double l1 = std::abs(kron);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    kron += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  kron *= half;
  gauss *= half;
  l1 *= half;
  const double err = std::max(std::abs(kron - gauss), 4.0 * kEps * l1);
  if (err <= abs_tol || depth <= 0 || err <= 8.0 * kEps * l1) return {kron, err};
  const Piece left = gk21(f, a, mid, 0.5 * abs_tol, depth - 1);
  const Piece right = gk21(f, mid, b, 0.5 * abs_tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule;
}

}  // namespace

Oscillator Oscillator::bessel(double order) {
  if (is_half(order, -0.5)) return {Kind::cosine, 0.0};
  if (order < 0.0) throw std::invalid_argument("Bessel order must be >= -1/2");
  return {Kind::bessel, order};
}

double Oscillator::operator()(double s) const {
  if (kind_ == Kind::cosine) return std::cos(s + param_);
  const double nu = param_;
  const double as = std::abs(s);
  if (as < 1e-4) {
    // Lambda_nu(s) = 1 - s^2/(4(nu+1)) + s^4/(32(nu+1)(nu+2)) - ...
    const double s2 = as * as;
    return 1.0 - s2 / (4.0 * (nu + 1.0)) + s2 * s2 / (32.0 * (nu + 1.0) * (nu + 2.0));
  }
  if (is_half(nu, 0.5)) return std::sin(as) / as;
  if (nu == 0.0) return boost::math::cyl_bessel_j(0, as);
  return std::tgamma(nu + 1.0) * std::pow(2.0 / as, nu) * boost::math::cyl_bessel_j(nu, as);
}

double Oscillator::zero(int j) const {
  if (kind_ == Kind::cosine) {
    double first = 0.5 * kPi - std::fmod(param_, kPi);
    while (first <= 0.0) first += kPi;
    while (first > kPi) first -= kPi;
    return first + (j - 1) * kPi;
  }
  if (is_half(param_, 0.5)) return j * kPi;
  return boost::math::cyl_bessel_j_zero(param_, j);
}

double weight_moment(double alpha, double tau, double q) {
  const double a = (q + 1.0) / alpha;
  return std::exp(std::lgamma(a) - a * std::log(tau)) / alpha;
}

double wynn_epsilon(std::span<const double> s, double* error) {
  const std::size_t n = s.size();
  if (n == 0) {
    if (error) *error = std::numeric_limits<double>::infinity();
    return 0.0;
  }
  std::vector<double> older(n + 1, 0.0);  // eps_{k-1}
  std::vector<double> col(s.begin(), s.end());  // eps_k
  double best = s.back();
  double prev_best = n > 1 ? s[n - 2] : s.back();
  for (int k = 0; col.size() > 1; ++k) {
    std::vector<double> next(col.size() - 1);
    bool stalled = false;
    for (std::size_t i = 0; i + 1 < col.size(); ++i) {
      const double diff = col[i + 1] - col[i];
      const double scale = std::max(std::abs(col[i + 1]), std::abs(col[i]));
      if (diff == 0.0 || std::abs(diff) <= 4.0 * kEps * scale) {
        stalled = true;
        break;
      }
      next[i] = older[i + 1] + 1.0 / diff;
    }
    if (stalled) break;
    older = std::move(col);
    col = std::move(next);
    if ((k + 1) % 2 == 0) {
      prev_best = best;
      best = col.back();
    }
  }
  if (error) *error = std::abs(best - prev_best);
  return best;
}

QuadResult integrate(const RadialIntegrand& f, double freq, double tol, const QuadOptions& opt) {
  const double alpha = f.alpha;
  const double tau = f.tau;
  const double q = f.power;
  const Oscillator& osc = f.osc;
  const double z = std::abs(freq);

  const double a = (q + 1.0) / alpha;
  const double moment = weight_moment(alpha, tau, q);
  const double trunc_error = kTailFraction * moment;

  QuadResult out;
  if (z == 0.0) {
    out.value = moment * osc(0.0);
    out.error = 4.0 * kEps * moment;
    return out;
  }

  const double u_hi = boost::math::gamma_q_inv(a, kTailFraction);
  const double k_hi = std::pow(u_hi / tau, 1.0 / alpha);

  auto weight = [&](double k) { return std::exp(-tau * std::pow(k, alpha)) * std::pow(k, q); };
  auto integrand = [&](double k) { return weight(k) * osc(k * z); };

  // First piece in u = tau k^alpha: moment-normalized Gamma(a) shape.
  const double prefactor = std::exp(-a * std::log(tau)) / alpha;
  auto first_piece = [&](double k_end) -> Piece {
    const double u_end = tau * std::pow(k_end, alpha);
    auto g = [&](double u) {
      if (u <= 0.0) return a == 1.0 ? osc(0.0) : (a > 1.0 ? 0.0 : std::numeric_limits<double>::max());
      const double k = std::pow(u / tau, 1.0 / alpha);
      return std::exp(-u + (a - 1.0) * std::log(u)) * osc(k * z);
    };
    double err = 0.0;
    double l1 = 0.0;
    const double v = tanh_sinh_rule().integrate(g, 0.0, u_end, 1e-15, &err, &l1);
    return {prefactor * v, prefactor * std::max(err, 4.0 * kEps * l1)};
  };

  double b = osc.zero(1) / z;
  if (b >= k_hi) {
    const Piece p = first_piece(k_hi);
    out.value = p.value;
    out.error = p.error + trunc_error;
    out.segments = 1;
    if (out.error > tol && out.error > 64.0 * kEps * moment)
      throw NonConvergence("radial quadrature: single-piece integral missed tolerance", out.error);
    return out;
  }

  const Piece p0 = first_piece(b);
  double sum = p0.value;
  double piece_errors = p0.error;
  double magnitude = std::abs(p0.value);
  std::vector<double> partial{sum};
  double last_estimate = sum;
  double last_gap = std::numeric_limits<double>::infinity();

  for (int j = 1; j < opt.max_segments; ++j) {
    const double lo = b;
    b = osc.zero(j + 1) / z;
    const bool last = b >= k_hi;
    const double hi = last ? k_hi : b;
    const double piece_tol = std::max(1e-3 * tol, 1e-15 * magnitude);
    const Piece p = gk21(integrand, lo, hi, piece_tol, 12);
    sum += p.value;
    piece_errors += p.error;
    magnitude = std::max(magnitude, std::abs(sum));
    if (last) {
      out.value = sum;
      out.error = piece_errors + trunc_error;
      out.segments = j + 1;
      if (out.error > tol && out.error > 64.0 * kEps * magnitude)
        throw NonConvergence("radial quadrature: direct summation missed tolerance", out.error);
      return out;
    }
    partial.push_back(sum);
    if (static_cast<int>(partial.size()) < opt.min_segments) continue;

    const std::size_t window = std::min<std::size_t>(partial.size(), opt.wynn_window);
    double wynn_err = 0.0;
    const double estimate =
        wynn_epsilon(std::span<const double>(partial).last(window), &wynn_err);
    const double gap = std::abs(estimate - last_estimate);
    const double err = std::max(wynn_err, gap) + std::max(gap, last_gap) + piece_errors + trunc_error;
    last_estimate = estimate;
    last_gap = gap;
    const double floor = 64.0 * kEps * magnitude;
    if (err <= tol || err <= floor) {
      out.value = estimate;
      out.error = err;
      out.segments = j + 1;
      out.extrapolated = true;
      return out;
    }
  }
  throw NonConvergence("radial quadrature: segment budget exhausted", std::abs(last_gap));
}

}  // namespace fracfp::quad

#include "fracfp/ou_kernel.hpp"

#include <cmath>
#include <string>

#include "fracfp/stable_kernel.hpp"

namespace fracfp {

double time_dilation(double alpha, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  return std::expm1(alpha * t) / alpha;
}

double effective_time(double alpha, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  return -std::expm1(-alpha * t) / alpha;
}

TimeChange TimeChange::at(double alpha, double t) {
  TimeChange tc{t, time_dilation(alpha, t), effective_time(alpha, t)};
  if (std::isfinite(tc.dilated)) {
    const double rebuilt = std::exp(alpha * t) * tc.effective;
    if (std::abs(rebuilt - tc.dilated) > 1e-12 * tc.dilated)
      throw std::logic_error("time change identity violated at t = " + std::to_string(t));
  }
  return tc;
}

void OUKernelQuery::validate(const StableLaw& law) const {
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (x.dim() != law.dim() || y.dim() != law.dim())
    throw std::invalid_argument("point dimension does not match the law");
}

double ou_kernel_dilated(const StableLaw& law, const OUKernelQuery& q) {
  q.validate(law);
  if (q.t > dilation_switch_time(law.alpha()))
    throw std::invalid_argument("dilated form overflows beyond t = 30/alpha; use the reduced form");
  const double a = law.alpha();
  const double growth = std::exp(law.dim() * q.t);
  const TimeChange tc = TimeChange::at(a, q.t);
  const Point arg = q.y - q.x * std::exp(q.t);
  return growth * heat_kernel(law, {tc.dilated, arg, q.tol / growth});
}

double ou_kernel_reduced(const StableLaw& law, const OUKernelQuery& q) {
  q.validate(law);
  const double s = effective_time(law.alpha(), q.t);
  return heat_kernel(law, {s, q.x - q.y * std::exp(-q.t), q.tol});
}

double ou_kernel(const StableLaw& law, const OUKernelQuery& q) {
  if (q.t > dilation_switch_time(law.alpha())) return ou_kernel_reduced(law, q);
  return ou_kernel_dilated(law, q);
}

double ou_kernel_gradient(const StableLaw& law, const OUKernelQuery& q, int m) {
  if (m < 1 || m > 2) throw std::invalid_argument("gradient order must be 1 or 2");
  q.validate(law);
  if (q.t > dilation_switch_time(law.alpha())) return ou_kernel_gradient_reduced(law, q, m);
  const TimeChange tc = TimeChange::at(law.alpha(), q.t);
  const double et = std::exp(q.t);
  const double scale = std::exp(law.dim() * q.t) * std::pow(et, m);
  const double sign = (m % 2 == 1) ? -1.0 : 1.0;
  const Point arg = q.y - q.x * et;
  return sign * scale * kernel_derivative(law, tc.dilated, arg, m, q.tol / scale);
}

double ou_kernel_gradient_reduced(const StableLaw& law, const OUKernelQuery& q, int m) {
  if (m < 1 || m > 2) throw std::invalid_argument("gradient order must be 1 or 2");
  q.validate(law);
  const double s = effective_time(law.alpha(), q.t);
  return kernel_derivative(law, s, q.x - q.y * std::exp(-q.t), m, q.tol);
}

double stationary_density(const StableLaw& law, const Point& x, double tol) {
  return heat_kernel(law, {1.0 / law.alpha(), x, tol});
}

}  // namespace fracfp

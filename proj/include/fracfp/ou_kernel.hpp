#ifndef FRACFP_OU_KERNEL_HPP
#define FRACFP_OU_KERNEL_HPP

#include "fracfp/stable_law.hpp"

namespace fracfp {

// Transition density p(t, x, y) of dX = -X dt + dL, L isotropic alpha-stable,
// from y at time 0 to x at time t. It integrates to one in x and is an exact
// rescaling of the fractional heat kernel:
//
//   p(t, x, y) = e^{d t} p_hat(t_dil, y - e^t x),   t_dil = (e^{alpha t} - 1)/alpha
//              = p_hat(s, x - e^{-t} y),            s     = (1 - e^{-alpha t})/alpha

/// (e^{alpha t} - 1) / alpha, via expm1.
double time_dilation(double alpha, double t);

/// (1 - e^{-alpha t}) / alpha, via expm1. Tends to 1/alpha.
double effective_time(double alpha, double t);

struct TimeChange {
  double t;
  double dilated;
  double effective;

  /// Throws std::invalid_argument for t <= 0; checks dilated = e^{alpha t} effective.
  static TimeChange at(double alpha, double t);
};

struct OUKernelQuery {
  double t;
  Point x;  ///< target point; the kernel integrates to one over x
  Point y;  ///< source point
  double tol = 1e-10;

  void validate(const StableLaw& law) const;
};

/// Beyond t = 30/alpha the dilated form overflows; the reduced form is used.
inline double dilation_switch_time(double alpha) { return 30.0 / alpha; }

/// e^{dt} p_hat(t_dil, y - e^t x). Rejects t beyond the switch time.
double ou_kernel_dilated(const StableLaw& law, const OUKernelQuery& q);

/// p_hat(s, x - e^{-t} y).
double ou_kernel_reduced(const StableLaw& law, const OUKernelQuery& q);

/// Dilated form up to the switch time, reduced form beyond it.
double ou_kernel(const StableLaw& law, const OUKernelQuery& q);

/// d^m/dx_1^m p(t, x, y) = (-1)^m e^{dt} e^{mt} (d^m p_hat / dz_1^m)(t_dil, y - e^t x), m in {1, 2}.
double ou_kernel_gradient(const StableLaw& law, const OUKernelQuery& q, int m);

/// d^m/dx_1^m p_hat(s, x - e^{-t} y).
double ou_kernel_gradient_reduced(const StableLaw& law, const OUKernelQuery& q, int m);

/// Invariant density p_hat(1/alpha, x).
double stationary_density(const StableLaw& law, const Point& x, double tol);

}  // namespace fracfp

#endif  // FRACFP_OU_KERNEL_HPP

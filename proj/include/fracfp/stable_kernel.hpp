#ifndef FRACFP_STABLE_KERNEL_HPP
#define FRACFP_STABLE_KERNEL_HPP

#include "fracfp/stable_law.hpp"

namespace fracfp {

// Fractional heat kernel p(t, x): the density whose Fourier transform is
// exp(-t |xi|^alpha). All routines are pure and thread-safe.

/// Smallest stability index the oscillatory quadrature supports.
inline constexpr double kMinQuadratureAlpha = 0.3;

/// Default absolute accuracy: 1e-10 in one dimension, 1e-8 otherwise.
inline double default_tolerance(int dim) { return dim == 1 ? 1e-10 : 1e-8; }

enum class KernelMethod {
  automatic,    ///< closed form for alpha in {1, 2}, reduced quadrature otherwise
  closed_form,  ///< alpha in {1, 2} only
  quadrature,   ///< self-similar reduction to t = 1, then quadrature
};

double heat_kernel(const StableLaw& law, const KernelQuery& q,
                   KernelMethod method = KernelMethod::automatic);

/// Gaussian (alpha = 2) and Cauchy (alpha = 1) densities in R^d.
double heat_kernel_closed_form(const StableLaw& law, double t, const Point& x);

/// Radial Fourier inversion evaluated directly at time t, without the
/// self-similar reduction. Accepts alpha in [0.3, 2].
double heat_kernel_quadrature(const StableLaw& law, double t, const Point& x, double tol);

struct SelfSimilarReduction {
  Point x;        ///< x t^{-1/alpha}
  double factor;  ///< t^{-d/alpha}
};

/// p(t, x) = factor * p(1, reduced x).
SelfSimilarReduction self_similar_reduce(const StableLaw& law, double t, const Point& x);

/// min(t / r^(d+alpha), t^(-d/alpha)); r = 0 gives the bulk side.
BoundValue sharp_bound(const StableLaw& law, double t, double r);

/// Sum over n = 0..floor(m/2) of r^(m-2n) min(t / r^(d+alpha+2(m-n)),
/// t^(-(d+2(m-n))/alpha)), all prefactors set to one.
double derivative_bound(const StableLaw& law, int m, double t, double r);

/// m-th partial derivative along the first axis, m in 0..4.
///
/// In one dimension the quadrature carries k^m cos(k x + m pi / 2). In
/// higher dimensions the radial identity (1/r) d/dr p_D = -2 pi p_{D+2}
/// expands the derivative as
///   sum_n m! / (2^n n! (m-2n)!) x_1^(m-2n) (-2 pi)^(m-n) p_{d+2(m-n)}(|x|).
double kernel_derivative(const StableLaw& law, double t, const Point& x, int m, double tol);

/// Richardson-extrapolated central differences of heat_kernel along the
/// first axis. Independent cross-check of kernel_derivative.
double kernel_derivative_fd(const StableLaw& law, double t, const Point& x, int m, double tol);

struct CheckedDerivative {
  double value;
  double finite_difference;
};

/// Both routes; throws NonConvergence when they differ by more than 10 tol.
CheckedDerivative kernel_derivative_checked(const StableLaw& law, double t, const Point& x,
                                            int m, double tol);

/// Radially symmetric stable density in R^D for any D >= 1 at distance r,
/// evaluated directly at time t (closed form when alpha is 1 or 2).
double radial_density(int D, double alpha, double t, double r, double tol);

/// Distribution function of the one-dimensional kernel.
double heat_kernel_cdf(const StableLaw& law, double t, double x, double tol);

/// A with p(1, x) ~ A |x|^{-d-alpha} as |x| -> infinity; zero for alpha = 2.
double tail_constant(const StableLaw& law);

/// Mass of p(t, .) outside the ball of radius R from the integrated leading
/// tail term A t R^{-alpha} |S^{d-1}| / alpha (Gaussian: exact). Asymptotically
/// exact; an upper bound for alpha <= 1, slightly low at moderate R otherwise.
double tail_mass_bound(const StableLaw& law, double t, double radius);

}  // namespace fracfp

#endif  // FRACFP_STABLE_KERNEL_HPP

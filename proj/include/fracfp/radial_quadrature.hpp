#ifndef FRACFP_RADIAL_QUADRATURE_HPP
#define FRACFP_RADIAL_QUADRATURE_HPP

#include <span>

// Oscillatory integrals of the form
//
//     I(z) = \int_0^\infty exp(-tau k^alpha) k^q  w(k z) dk
//
// where w is cos(. + phase) or the normalized Bessel function
// Lambda_nu(s) = Gamma(nu + 1) (2/s)^nu J_nu(s), which equals 1 at s = 0.
// Every radial Fourier inversion in this library reduces to one of these.
//
// The half-line is cut at the zeros of w(k z). The first piece is done by
// tanh-sinh in u = tau k^alpha, which absorbs the k^alpha cusp at the origin;
// later pieces use adaptive Gauss-Kronrod. Partial sums over the pieces are
// accelerated with Wynn's epsilon algorithm once the oscillatory tail is
// reached; if the weight decays before that, the pieces are summed out to
// the point where exp(-tau k^alpha) k^q is negligible.

namespace fracfp::quad {

class Oscillator {
 public:
  enum class Kind { cosine, bessel };

  /// cos(s + phase)
  static Oscillator cosine(double phase = 0.0) { return {Kind::cosine, phase}; }
  /// Lambda_nu(s); nu = -1/2 is cos(s), nu = 1/2 is sin(s)/s.
  static Oscillator bessel(double order);

  Kind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }

  double operator()(double s) const;
  /// j-th positive zero (j >= 1), increasing in j.
  double zero(int j) const;

 private:
  Oscillator(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

struct RadialIntegrand {
  double alpha;
  double tau;
  double power;
  Oscillator osc;
};

struct QuadOptions {
  int max_segments = 6000;
  int wynn_window = 40;
  int min_segments = 8;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int segments = 0;
  bool extrapolated = false;
};

/// Integrates to absolute accuracy tol, or to the roundoff floor of the
/// partial sums when tol is below it. Throws NonConvergence otherwise.
QuadResult integrate(const RadialIntegrand& f, double freq, double tol,
                     const QuadOptions& opt = {});

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// highest even-column estimate; *error receives the gap to the previous
/// even column.
double wynn_epsilon(std::span<const double> partial_sums, double* error);

/// \int_0^\infty exp(-tau k^alpha) k^q dk = Gamma((q+1)/alpha) tau^{-(q+1)/alpha} / alpha.
double weight_moment(double alpha, double tau, double q);

}  // namespace fracfp::quad

#endif  // FRACFP_RADIAL_QUADRATURE_HPP

#ifndef FRACFP_SOLVER_HPP
#define FRACFP_SOLVER_HPP

#include <vector>

#include "fracfp/grid.hpp"
#include "fracfp/initial_data.hpp"
#include "fracfp/stable_law.hpp"

namespace fracfp {

// Solution of  d_t u = Delta^{alpha/2} u + div(x u),  u(0) = u0,  as the
// contraction u(t, x) = \int p(t, x, y) u0(y) dy. On a periodic grid this is
// one spectral heat step of length t_dil followed by the relabelling x = e^{-t} y
// and the factor e^{dt}: grid nodes map onto grid nodes, so no interpolation
// enters and the node sum is conserved exactly.

inline constexpr double kClampEpsilon = 1e-8;

/// Multiplies the discrete Fourier coefficients by exp(-tau |xi|^alpha).
Field heat_propagate(const StableLaw& law, const Field& f, double tau);

/// u(t) on the input grid contracted by e^{-t} (same n, half-width e^{-t} L).
/// Output is clamped; min_before_clamp() keeps the ringing record.
Field ou_solve(const StableLaw& law, const Field& u0, double t);

/// u(t) interpolated (cubic) onto out. Requires e^t L_out <= L_in.
Field ou_solve(const StableLaw& law, const Field& u0, double t, const Grid& out);

/// Discretizes u0 on the input grid whose contraction is exactly out and solves.
Field solve_on_window(const StableLaw& law, const InitialData& u0, double t, const Grid& out);

enum class Contraction {
  /// Exact integral of the kernel over each cell times the cell value (d = 1).
  cell,
  /// Trapezoid rule: sum_j p(t, x, y_j) u0_j h^d.
  point,
};

/// Direct quadrature contraction of the OU kernel against the field at x.
double ou_solve_direct(const StableLaw& law, const Field& u0, double t, const Point& x,
                       double tol = 1e-12);
double ou_solve_direct(const StableLaw& law, const Field& u0, double t, const Point& x,
                       double tol, Contraction rule);

/// Window sizing from the tail-mass bound.
struct DomainPlan {
  Grid output;
  Grid input;
  double support_radius;  ///< contracted radius of the data's compact part
  double tail_mass;       ///< bound on mass beyond the window at time t
  double budget;
  double suggested_half_width;
};

DomainPlan plan_domain(const StableLaw& law, const InitialData& u0, double t, double half_width,
                       int n, double mass_budget);

/// Throws ConfigError naming a sufficient half-width when the plan exceeds its budget.
void require_tail_budget(const DomainPlan& plan);

struct ResidualReport {
  double residual;      ///< max |d_t u - Delta^{alpha/2} u - div(x u)| over the inner half
  double time_term;     ///< max |d_t u| over the same region
  double spatial_term;  ///< max |Delta^{alpha/2} u + div(x u)|
};

/// Centered difference in time of solutions at t +- dt on the window.
ResidualReport pde_residual(const StableLaw& law, const InitialData& u0, const Grid& window, double t,
                            double dt_probe);

struct ContinuityReport {
  std::vector<int> k;
  std::vector<double> t;
  std::vector<double> deviation;  ///< |u(t_k, x_k) - u0(x0)|
  double reference;
  double tail_max;                ///< max deviation over k > 5
  bool monotone;                  ///< strictly decreasing beyond k = 5
};

/// Probes u along t_k = 2^{-k}, |x_k - x0| = t_k^{1/alpha}/2, k = 3..10, with the
/// direct contraction. Rejects x0 outside the continuity set.
ContinuityReport initial_continuity_check(const StableLaw& law, const InitialData& u0,
                                          const Grid& grid, const Point& x0, double tol = 1e-12,
                                          int k_first = 3, int k_last = 10);

struct SmoothnessRow {
  int order;
  double coarse_sup;
  double fine_sup;
  double ratio;
  bool stable;  ///< |ratio - 1| < 5%
};

/// Finite-difference derivative sup-norms of u(t) on window (n) and its refinement (2n).
std::vector<SmoothnessRow> smoothness_probe(const StableLaw& law, const InitialData& u0, double t,
                                            const std::vector<int>& orders, const Grid& window);

/// Exact cell averages of the trigonometric interpolant (multiplier prod sinc(xi h / 2)).
Field cell_averages(const Field& f);

}  // namespace fracfp

#endif  // FRACFP_SOLVER_HPP

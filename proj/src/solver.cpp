#include "fracfp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracfp/ou_kernel.hpp"
#include "fracfp/spectral.hpp"
#include "fracfp/stable_kernel.hpp"

namespace fracfp {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("solve time must be positive");
}

// Heat step of length t_dil, then relabel onto `out` (the input grid contracted
// by e^{-t}) with the factor e^{dt}. No clamping.
Field propagate_raw(const StableLaw& law, const Field& u0, double t, const Grid& out) {
  const TimeChange tc = TimeChange::at(law.alpha(), t);
  const Field heat = heat_multiplier(law, u0, tc.dilated);
  const double growth = std::exp(law.dim() * t);
  std::vector<double> v(heat.values().begin(), heat.values().end());
  for (double& x : v) x *= growth;
  return Field(out, std::move(v), u0.time() + t);
}

Field raw_on_window(const StableLaw& law, const InitialData& u0, double t, const Grid& out) {
  const Grid in = out.scaled(std::exp(t));
  return propagate_raw(law, u0.discretize(in), t, out);
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double contracted_radius(const InitialData& u0, double t) {
  const double shrink = std::exp(-t);
  if (auto r = u0.support_radius()) return *r * shrink;
  if (const auto* g = std::get_if<GaussianMixtureData>(&u0.spec())) {
    double r = 0.0;
    for (const auto& c : g->components) r = std::max(r, c.mean.norm() + 8.0 * c.sigma);
    return r * shrink;
  }
  if (const auto* s = std::get_if<SampledData>(&u0.spec())) {
    const Grid& g = s->field.grid();
    return g.half_width() * std::sqrt(static_cast<double>(g.dim())) * shrink;
  }
  return 0.0;
}

}  // namespace

Field heat_propagate(const StableLaw& law, const Field& f, double tau) {
  if (tau < 0.0) throw std::invalid_argument("heat time must be nonnegative");
  if (f.grid().dim() != law.dim()) throw std::invalid_argument("field and law differ in dimension");
  if (tau == 0.0) return f;
  return heat_multiplier(law, f, tau);
}

Field ou_solve(const StableLaw& law, const Field& u0, double t) {
  require_positive_time(t);
  if (u0.grid().dim() != law.dim()) throw std::invalid_argument("field and law differ in dimension");
  return propagate_raw(law, u0, t, u0.grid().scaled(std::exp(-t))).clamped();
}

Field ou_solve(const StableLaw& law, const Field& u0, double t, const Grid& out) {
  require_positive_time(t);
  const double reach = std::exp(t) * out.half_width();
  if (reach > u0.grid().half_width() * (1.0 + 1e-12))
    throw ConfigError("headroom violation: e^t L_out = " + std::to_string(reach) +
                      " exceeds the input half-width " + std::to_string(u0.grid().half_width()) +
                      "; use L_out <= " + std::to_string(std::exp(-t) * u0.grid().half_width()));
  const Field natural = propagate_raw(law, u0, t, u0.grid().scaled(std::exp(-t)));
  return resample(natural, out).clamped();
}

Field solve_on_window(const StableLaw& law, const InitialData& u0, double t, const Grid& out) {
  require_positive_time(t);
  return raw_on_window(law, u0, t, out).clamped();
}

double ou_solve_direct(const StableLaw& law, const Field& u0, double t, const Point& x, double tol) {
  return ou_solve_direct(law, u0, t, x, tol,
                         law.dim() == 1 ? Contraction::cell : Contraction::point);
}

double ou_solve_direct(const StableLaw& law, const Field& u0, double t, const Point& x, double tol,
                       Contraction rule) {
  require_positive_time(t);
  const Grid& g = u0.grid();
  if (g.dim() != law.dim() || x.dim() != law.dim())
    throw std::invalid_argument("field, point and law must share a dimension");
  const auto v = u0.values();

  if (rule == Contraction::point) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (v[j] == 0.0) continue;
      acc += v[j] * ou_kernel(law, {t, x, g.point(j), tol});
    }
    return acc * g.cell_volume();
  }

  if (g.dim() != 1) throw std::invalid_argument("cell contraction is one-dimensional");
  // The kernel mass over a cell is e^t [F_s(x - e^{-t} y_lo) - F_s(x - e^{-t} y_hi)].
  const double s = effective_time(law.alpha(), t);
  const double shrink = std::exp(-t);
  const double h = g.spacing();
  const double edge_tol = tol / std::max(1.0, std::abs(u0.max()) * std::exp(t));
  auto cdf_at_edge = [&](double y) { return heat_kernel_cdf(law, s, x[0] - shrink * y, edge_tol); };
  double acc = 0.0;
  double upper = 0.0;
  bool have_upper = false;
  for (int j = 0; j < g.n(); ++j) {
    if (v[j] == 0.0) {
      have_upper = false;
      continue;
    }
    const double y = g.node(j);
    const double lo = have_upper ? upper : cdf_at_edge(y - 0.5 * h);
    const double hi = cdf_at_edge(y + 0.5 * h);
    acc += v[j] * (lo - hi);
    upper = hi;
    have_upper = true;
  }
  return acc * std::exp(t);
}

DomainPlan plan_domain(const StableLaw& law, const InitialData& u0, double t, double half_width,
                       int n, double mass_budget) {
  require_positive_time(t);
  if (!(mass_budget > 0.0)) throw std::invalid_argument("mass budget must be positive");
  const Grid out(law.dim(), half_width, n);
  const bool stationary = std::holds_alternative<StationaryData>(u0.spec());
  const double s = stationary ? 1.0 / law.alpha() : effective_time(law.alpha(), t);
  const double r0 = stationary ? 0.0 : contracted_radius(u0, t);
  auto tail = [&](double radius) { return tail_mass_bound(law, s, radius); };
  const double tail_mass = half_width > r0 ? tail(half_width - r0) : 1.0;

  double r = 1.0;
  while (tail(r) > mass_budget && r < 1e300) r *= 2.0;
  double lo = 0.5 * r, hi = r;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > mass_budget ? lo : hi) = mid;
  }
  return {out, out.scaled(std::exp(t)), r0, tail_mass, mass_budget, r0 + hi};
}

void require_tail_budget(const DomainPlan& plan) {
  if (plan.tail_mass > plan.budget)
    throw ConfigError("tail-mass budget violation: bound " + std::to_string(plan.tail_mass) +
                      " exceeds budget " + std::to_string(plan.budget) + "; use half-width >= " +
                      std::to_string(plan.suggested_half_width));
}

ResidualReport pde_residual(const StableLaw& law, const InitialData& u0, const Grid& window, double t,
                            double dt_probe) {
  if (!(dt_probe > 0.0) || !(t > dt_probe))
    throw std::invalid_argument("pde_residual needs t > dt_probe > 0");
  const Field um = raw_on_window(law, u0, t - dt_probe, window);
  const Field uc = raw_on_window(law, u0, t, window);
  const Field up = raw_on_window(law, u0, t + dt_probe, window);
  const Field lap = fractional_laplacian(law, uc);
  std::vector<Field> grads;
  for (int k = 0; k < window.dim(); ++k) grads.push_back(spectral_derivative(uc, k));

  const double limit = 0.5 * window.half_width() * (1.0 + 1e-12);
  ResidualReport rep{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < window.size(); ++i) {
    const Point x = window.point(i);
    bool inner = true;
    for (int k = 0; k < window.dim(); ++k) inner = inner && std::abs(x[k]) <= limit;
    if (!inner) continue;
    const double dudt = (up[i] - um[i]) / (2.0 * dt_probe);
    double div = window.dim() * uc[i];
    for (int k = 0; k < window.dim(); ++k) div += x[k] * grads[k][i];
    const double spatial = lap[i] + div;
    rep.residual = std::max(rep.residual, std::abs(dudt - spatial));
    rep.time_term = std::max(rep.time_term, std::abs(dudt));
    rep.spatial_term = std::max(rep.spatial_term, std::abs(spatial));
  }
  return rep;
}

ContinuityReport initial_continuity_check(const StableLaw& law, const InitialData& u0,
                                          const Grid& grid, const Point& x0, double tol,
                                          int k_first, int k_last) {
  if (!u0.is_continuity_point(x0))
    throw std::invalid_argument("x0 is not a continuity point of the initial data");
  if (k_first < 1 || k_last < k_first) throw std::invalid_argument("bad probe index range");
  const Field f = u0.discretize(grid);
  ContinuityReport rep;
  rep.reference = u0.value(x0);
  rep.tail_max = 0.0;
  rep.monotone = true;
  for (int k = k_first; k <= k_last; ++k) {
    const double tk = std::ldexp(1.0, -k);
    Point xk = x0;
    xk[0] += 0.5 * std::pow(tk, 1.0 / law.alpha());
    const double dev = std::abs(ou_solve_direct(law, f, tk, xk, tol) - rep.reference);
    if (k > 5) {
      rep.tail_max = std::max(rep.tail_max, dev);
      if (!rep.deviation.empty() && rep.k.back() >= 5 && !(dev < rep.deviation.back()))
        rep.monotone = false;
    }
    rep.k.push_back(k);
    rep.t.push_back(tk);
    rep.deviation.push_back(dev);
  }
  return rep;
}

std::vector<SmoothnessRow> smoothness_probe(const StableLaw& law, const InitialData& u0, double t,
                                            const std::vector<int>& orders, const Grid& window) {
  require_positive_time(t);
  const Grid fine(window.dim(), window.half_width(), 2 * window.n());
  const Field coarse_u = raw_on_window(law, u0, t, window);
  const Field fine_u = raw_on_window(law, u0, t, fine);
  std::vector<SmoothnessRow> rows;
  for (int m : orders) {
    if (m < 1 || m > 4) throw std::invalid_argument("smoothness orders must lie in 1..4");
    const double a = interior_sup(finite_difference(coarse_u, m, 0));
    const double b = interior_sup(finite_difference(fine_u, m, 0));
    const double ratio = b / a;
    rows.push_back({m, a, b, ratio, std::abs(ratio - 1.0) < 0.05});
  }
  return rows;
}

Field cell_averages(const Field& f) {
  const double half_h = 0.5 * f.grid().spacing();
  const int d = f.grid().dim();
  return apply_multiplier(f, [&](const std::array<double, 3>& xi, double) {
    double m = 1.0;
    for (int k = 0; k < d; ++k) m *= sinc(xi[k] * half_h);
    return m;
  });
}

}  // namespace fracfp

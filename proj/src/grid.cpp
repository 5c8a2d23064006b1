#include "fracfp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfp {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int wrap(long i, int n) {
  long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Lagrange weights for nodes at offsets -1, 0, 1, 2 evaluated at u in [0, 1).
std::array<double, 4> cubic_weights(double u) {
  return {-u * (u - 1.0) * (u - 2.0) / 6.0, (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
          -(u + 1.0) * u * (u - 2.0) / 2.0, (u + 1.0) * u * (u - 1.0) / 6.0};
}

}  // namespace

Grid::Grid(int dim, double half_width, int n) : dim_(dim), half_width_(half_width), n_(n) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half-width must be positive and finite");
  if (n < 16 || !is_power_of_two(n))
    throw std::invalid_argument("points per axis must be a power of two >= 16, got " +
                                std::to_string(n));
  size_ = 1;
  for (int k = 0; k < dim; ++k) size_ *= static_cast<std::size_t>(n);
}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

std::array<int, 3> Grid::index(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int k = dim_ - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t Grid::flat(const std::array<int, 3>& idx) const noexcept {
  std::size_t f = 0;
  for (int k = 0; k < dim_; ++k) f = f * n_ + idx[k];
  return f;
}

Point Grid::point(std::size_t flat) const noexcept {
  const auto idx = index(flat);
  Point p = Point::on_axis(dim_, 0.0);
  for (int k = 0; k < dim_; ++k) p[k] = node(idx[k]);
  return p;
}

Field::Field(Grid grid, std::vector<double> values, double time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field size does not match its grid");
  if (!(time >= 0.0)) throw std::invalid_argument("field time must be nonnegative");
  double sum = 0.0;
  for (double v : values_) sum += v;
  mass_ = sum * grid_.cell_volume();
  min_before_clamp_ = values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double Field::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

Field Field::clamped() const {
  std::vector<double> v = values_;
  for (double& x : v) x = std::max(x, 0.0);
  Field out(grid_, std::move(v), time_);
  out.min_before_clamp_ = std::min(min_before_clamp_, min());
  return out;
}

Field Field::with_time(double t) const {
  Field out(grid_, values_, t);
  out.min_before_clamp_ = min_before_clamp_;
  return out;
}

double interpolate(const Field& f, const Point& x) {
  const Grid& g = f.grid();
  const int d = g.dim();
  const int n = g.n();
  const double h = g.spacing();
  std::array<int, 3> base{0, 0, 0};
  std::array<std::array<double, 4>, 3> w{};
  for (int k = 0; k < d; ++k) {
    const double s = (x[k] + g.half_width()) / h;
    const double fl = std::floor(s);
    base[k] = static_cast<int>(static_cast<long>(fl) % n);
    w[k] = cubic_weights(s - fl);
  }
  const auto vals = f.values();
  double acc = 0.0;
  std::array<int, 3> idx{0, 0, 0};
  const int span0 = 4, span1 = d > 1 ? 4 : 1, span2 = d > 2 ? 4 : 1;
  for (int a = 0; a < span0; ++a) {
    idx[0] = wrap(base[0] + a - 1, n);
    for (int b = 0; b < span1; ++b) {
      if (d > 1) idx[1] = wrap(base[1] + b - 1, n);
      for (int c = 0; c < span2; ++c) {
        if (d > 2) idx[2] = wrap(base[2] + c - 1, n);
        double wt = w[0][a];
        if (d > 1) wt *= w[1][b];
        if (d > 2) wt *= w[2][c];
        acc += wt * vals[g.flat(idx)];
      }
    }
  }
  return acc;
}

Field resample(const Field& f, const Grid& target) {
  if (target.dim() != f.grid().dim()) throw std::invalid_argument("resample: dimension mismatch");
  if (target == f.grid()) return f;
  std::vector<double> v(target.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = interpolate(f, target.point(i));
  return Field(target, std::move(v), f.time());
}

Field restrict_window(const Field& f, const Grid& sub) {
  const Grid& g = f.grid();
  if (sub.dim() != g.dim() || sub.n() > g.n() ||
      std::abs(sub.spacing() - g.spacing()) > 1e-12 * g.spacing())
    throw std::invalid_argument("sub-window must share dimension and spacing with the field");
  const int offset = (g.n() - sub.n()) / 2;
  std::vector<double> v(sub.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto idx = sub.index(i);
    for (int k = 0; k < g.dim(); ++k) idx[k] += offset;
    v[i] = f[g.flat(idx)];
  }
  Field out(sub, std::move(v), f.time());
  return out;
}

Field finite_difference(const Field& f, int m, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("axis out of range");
  // Fourth-order accurate central stencils over offsets -3..3.
  static constexpr std::array<std::array<double, 7>, 4> stencil{{
      {0.0, 1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12, 0.0},
      {0.0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0.0},
      {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8},
      {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6},
  }};
  if (m < 1 || m > 4) throw std::invalid_argument("finite difference order must be in 1..4");
  const auto& w = stencil[m - 1];
  const double scale = std::pow(g.spacing(), -m);
  const auto vals = f.values();
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto idx = g.index(i);
    const int centre = idx[axis];
    double acc = 0.0;
    for (int o = -3; o <= 3; ++o) {
      if (w[o + 3] == 0.0) continue;
      idx[axis] = wrap(centre + o, g.n());
      acc += w[o + 3] * vals[g.flat(idx)];
    }
    out[i] = acc * scale;
  }
  return Field(g, std::move(out), f.time());
}

double interior_sup(const Field& f, double fraction) {
  const Grid& g = f.grid();
  const double limit = fraction * g.half_width() * (1.0 + 1e-12);
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.point(i);
    bool inside = true;
    for (int k = 0; k < g.dim(); ++k) inside = inside && std::abs(p[k]) <= limit;
    if (inside) best = std::max(best, std::abs(f[i]));
  }
  return best;
}

}  // namespace fracfp

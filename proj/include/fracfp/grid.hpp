#ifndef FRACFP_GRID_HPP
#define FRACFP_GRID_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fracfp/stable_law.hpp"

namespace fracfp {

/// Uniform periodic lattice on [-L, L)^d with n nodes per axis,
/// x_i = -L + i h, h = 2L/n. Flat indices are row-major (axis 0 slowest).
class Grid {
 public:
  Grid(int dim, double half_width, int n);

  int dim() const noexcept { return dim_; }
  double half_width() const noexcept { return half_width_; }
  int n() const noexcept { return n_; }
  double spacing() const noexcept { return 2.0 * half_width_ / n_; }
  double cell_volume() const noexcept;
  std::size_t size() const noexcept { return size_; }

  // Written as (i - n/2) h so that mirrored nodes are exact negatives.
  double node(int i) const noexcept { return (i - n_ / 2) * spacing(); }
  std::array<int, 3> index(std::size_t flat) const noexcept;
  std::size_t flat(const std::array<int, 3>& idx) const noexcept;
  Point point(std::size_t flat) const noexcept;

  /// Same node count, half-width multiplied by factor.
  Grid scaled(double factor) const { return Grid(dim_, half_width_ * factor, n_); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  double half_width_;
  int n_;
  std::size_t size_;
};

/// Real density sampled at grid nodes. Immutable once built.
class Field {
 public:
  Field(Grid grid, std::vector<double> values, double time = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double time() const noexcept { return time_; }

  /// Periodic trapezoid rule: h^d times the node sum.
  double mass() const noexcept { return mass_; }
  double min() const noexcept;
  double max() const noexcept;
  /// Smallest value seen before negative ringing was clamped away.
  double min_before_clamp() const noexcept { return min_before_clamp_; }

  /// Copy with negative values set to zero; remembers the pre-clamp minimum.
  Field clamped() const;
  Field with_time(double t) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  double time_;
  double mass_;
  double min_before_clamp_;
};

/// Tensor-product 4-point Lagrange interpolation with periodic wrap.
double interpolate(const Field& f, const Point& x);

/// Interpolates f onto the nodes of target.
Field resample(const Field& f, const Grid& target);

/// Central sub-window of f: sub must share the spacing and have at most f's nodes.
Field restrict_window(const Field& f, const Grid& sub);

/// Periodic fourth-order central difference of order m in 1..4 along axis.
Field finite_difference(const Field& f, int m, int axis = 0);

/// max |v| over nodes whose coordinates all satisfy |x_i| <= fraction * L.
double interior_sup(const Field& f, double fraction = 1.0);

}  // namespace fracfp

#endif  // FRACFP_GRID_HPP

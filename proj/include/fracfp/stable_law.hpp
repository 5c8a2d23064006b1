#ifndef FRACFP_STABLE_LAW_HPP
#define FRACFP_STABLE_LAW_HPP

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace fracfp {

/// Thrown when an oscillatory integral does not reach its requested
/// accuracy within the iteration budget.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Grid or run configuration that cannot produce a trustworthy answer
/// (missing headroom, tail mass over budget, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Isotropic alpha-stable semigroup with symbol exp(-t |xi|^alpha) in R^dim.
class StableLaw {
 public:
  StableLaw(double alpha, int dim) : alpha_(alpha), dim_(dim) {
    if (!(alpha > 0.0 && alpha <= 2.0))
      throw std::invalid_argument("stability index must lie in (0, 2], got " +
                                  std::to_string(alpha));
    if (dim < 1 || dim > 3)
      throw std::invalid_argument("dimension must be 1, 2 or 3, got " +
                                  std::to_string(dim));
  }

  double alpha() const noexcept { return alpha_; }
  int dim() const noexcept { return dim_; }
  bool is_gaussian() const noexcept { return alpha_ == 2.0; }
  bool is_cauchy() const noexcept { return alpha_ == 1.0; }
  bool has_closed_form() const noexcept { return is_gaussian() || is_cauchy(); }

  friend bool operator==(const StableLaw&, const StableLaw&) = default;

 private:
  double alpha_;
  int dim_;
};

/// A point in R^d, d <= 3.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<double> coords) {
    if (coords.size() < 1 || coords.size() > 3)
      throw std::invalid_argument("points must have 1 to 3 coordinates");
    dim_ = static_cast<int>(coords.size());
    int i = 0;
    for (double c : coords) c_[i++] = c;
  }
  static Point on_axis(int dim, double x1) {
    Point p;
    p.dim_ = dim;
    p.c_[0] = x1;
    return p;
  }

  int dim() const noexcept { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  double norm() const noexcept {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
    return std::sqrt(s);
  }

  Point operator-(const Point& o) const {
    Point r = *this;
    for (int i = 0; i < dim_; ++i) r.c_[i] -= o.c_[i];
    return r;
  }
  Point operator+(const Point& o) const {
    Point r = *this;
    for (int i = 0; i < dim_; ++i) r.c_[i] += o.c_[i];
    return r;
  }
  Point operator*(double s) const {
    Point r = *this;
    for (int i = 0; i < dim_; ++i) r.c_[i] *= s;
    return r;
  }

 private:
  std::array<double, 3> c_{};
  int dim_ = 1;
};

/// Evaluation point (t, x) with a requested absolute accuracy.
struct KernelQuery {
  double t;
  Point x;
  double tol = 1e-10;

  void validate(const StableLaw& law) const {
    if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (x.dim() != law.dim())
      throw std::invalid_argument("point dimension does not match the law");
  }
};

enum class BoundBranch { tail, bulk, crossover };

inline const char* to_string(BoundBranch b) {
  switch (b) {
    case BoundBranch::tail: return "tail";
    case BoundBranch::bulk: return "bulk";
    case BoundBranch::crossover: return "crossover";
  }
  return "?";
}

/// Value of min(t / r^(d+alpha), t^(-d/alpha)) with the active side.
struct BoundValue {
  double value;
  BoundBranch branch;
};

}  // namespace fracfp

#endif  // FRACFP_STABLE_LAW_HPP

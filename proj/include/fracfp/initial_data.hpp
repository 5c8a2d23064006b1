#ifndef FRACFP_INITIAL_DATA_HPP
#define FRACFP_INITIAL_DATA_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fracfp/grid.hpp"
#include "fracfp/stable_law.hpp"
#include "json.hpp"

namespace fracfp {

struct BoxData {
  Point lo;
  Point hi;
};

struct GaussianComponent {
  double weight;
  Point mean;
  double sigma;  ///< per-axis standard deviation
};

struct GaussianMixtureData {
  std::vector<GaussianComponent> components;
};

/// Constant density on [-a, a]^d.
struct UniformData {
  int dim;
  double half_width;
};

/// Invariant law p_hat(1/alpha, .).
struct StationaryData {
  StableLaw law;
  double tol;
};

/// Tabulated density, interpolated off its own grid.
struct SampledData {
  Field field;
};

/// Bounded, nonnegative initial density u0 together with the set of points
/// where it is known to be continuous.
class InitialData {
 public:
  using Spec = std::variant<BoxData, GaussianMixtureData, UniformData, StationaryData, SampledData>;

  static InitialData box(Point lo, Point hi);
  static InitialData gaussian(Point mean, double sigma);
  static InitialData gaussian_mixture(std::vector<GaussianComponent> components);
  static InitialData uniform(int dim, double half_width);
  static InitialData stationary(const StableLaw& law, double tol = 1e-12);
  static InitialData samples(Field field);

  const Spec& spec() const noexcept { return spec_; }
  std::string kind() const;
  int dim() const;

  /// Pointwise density with unit mass on R^d (box interiors are closed).
  double value(const Point& x) const;

  bool is_continuity_point(const Point& x) const;

  /// The stationary kind is not renormalized: it is represented by its
  /// periodization, whose images carry the mass beyond the window.
  bool renormalized_on_grid() const;

  /// Radius outside which the density vanishes; nullopt for unbounded support.
  std::optional<double> support_radius() const;

  /// Grid representation: cell averages for boxes, node samples for Gaussian
  /// mixtures, the periodized density for the stationary law; renormalized to
  /// unit grid mass where renormalized_on_grid().
  Field discretize(const Grid& grid) const;

  nlohmann::json to_json() const;
  static InitialData from_json(const nlohmann::json& j);

 private:
  explicit InitialData(Spec spec) : spec_(std::move(spec)) {}
  Spec spec_;
};

}  // namespace fracfp

#endif  // FRACFP_INITIAL_DATA_HPP

#ifndef FRACFP_MC_ORACLE_HPP
#define FRACFP_MC_ORACLE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracfp/grid.hpp"
#include "fracfp/initial_data.hpp"
#include "fracfp/random.hpp"
#include "fracfp/stable_law.hpp"

namespace fracfp {

/// Standard symmetric stable variate with E exp(i xi X) = exp(-|xi|^alpha).
/// d = 1: Chambers-Mallows-Stuck (Gaussian with variance 2 at alpha = 2).
/// d > 1: sqrt(kSubordinatorScale * S) G with G standard normal and S
/// positive (alpha/2)-stable, E exp(-l S) = exp(-l^{alpha/2}).
Point sample_standard_stable(const StableLaw& law, StreamRng& rng);

/// Scale c in sqrt(c S) G; the characteristic-function calibration
/// recorded in data/golden confirms it.
inline constexpr double kSubordinatorScale = 2.0;

/// Positive beta-stable variate, beta in (0, 1], by Kanter's representation.
double sample_positive_stable(double beta, StreamRng& rng);

/// Exact transition over dt: e^{-dt} x + s(dt)^{1/alpha} S.
Point ou_step(const Point& x, double dt, const StableLaw& law, StreamRng& rng);

/// Draws from an initial density (tabulated data by inverse CDF over cells).
class InitialSampler {
 public:
  explicit InitialSampler(const InitialData& u0);
  Point operator()(StreamRng& rng) const;

 private:
  const InitialData* u0_;
  std::vector<double> cdf_;
};

struct Ensemble {
  int dim = 1;
  double alpha = 2.0;
  double time = 0.0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<double> positions;  ///< n * dim, particle-major

  Point position(std::size_t i) const;
};

/// Particles are generated in fixed blocks; block b draws from stream
/// (seed, b), so results do not depend on the worker count.
inline constexpr std::size_t kEnsembleBlock = 4096;

Ensemble simulate_ensemble(const StableLaw& law, const InitialData& u0, double t, std::size_t n,
                           std::uint64_t seed, int workers = 1);

/// Header line "# seed=..., n=..., alpha=..., dim=..., t=..." then one row per particle.
void write_ensemble_csv(std::ostream& os, const Ensemble& e);
Ensemble read_ensemble_csv(std::istream& is);

struct Histogram {
  Field density;         ///< count / (n h^d); in-grid mass is 1 - outside_mass
  Field standard_error;  ///< sqrt(p (1 - p) / n) / h^d
  std::size_t outside = 0;
  double outside_mass = 0.0;
  bool warning = false;  ///< more than 1% of the samples left the grid
};

/// Bins are the node-centred cells of the grid.
Histogram empirical_density(const Ensemble& e, const Grid& grid);

/// Binomial standard errors of a histogram drawn from the model density f.
Field binomial_errors(const Field& model, std::size_t n);

struct Comparison {
  double sup = 0.0;
  double l1 = 0.0;
  std::size_t exceeding = 0;  ///< bins with |a - b| > k * error
  double worst_z = 0.0;
  bool pass = true;
};

Comparison compare_densities(const Field& a, const Field& b, const Field& errors, double k = 5.0);

/// Two-sample Kolmogorov-Smirnov statistic and the 5% critical value.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_critical_5pct(std::size_t n, std::size_t m);

}  // namespace fracfp

#endif  // FRACFP_MC_ORACLE_HPP

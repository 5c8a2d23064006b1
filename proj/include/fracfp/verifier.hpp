#ifndef FRACFP_VERIFIER_HPP
#define FRACFP_VERIFIER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracfp/stable_law.hpp"
#include "json.hpp"

namespace fracfp {

struct CheckRecord {
  std::string name;
  std::string anchor;  ///< the mathematical statement being checked
  nlohmann::json parameters;
  nlohmann::json measured;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
  double seconds = 0.0;  ///< wall time; excluded from the deterministic part
};

struct VerificationReport {
  std::vector<CheckRecord> checks;
  nlohmann::json environment;

  bool all_pass() const;
  /// Deterministic JSON (timings live under "timing" only).
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Log sweep in z = |x| t^{-1/alpha}.
struct Sweep {
  std::vector<double> times{0.01, 0.1, 1.0, 10.0, 100.0};
  double z_min = 1e-3;
  double z_max = 1e2;
  int per_decade = 8;

  std::vector<double> z_values() const;
  Sweep doubled() const;
};

/// Frozen constants from a first correct run; regressions beyond 1% fail.
struct Baselines {
  nlohmann::json data = nlohmann::json::object();

  static Baselines load(const std::filesystem::path& path);
  std::optional<double> get(const std::string& group, const std::string& key) const;
  void set(const std::string& group, const std::string& key, double value);
};

inline constexpr double kBaselineDrift = 0.01;

CheckRecord check_two_sided_estimate(const StableLaw& law, const Sweep& sweep,
                                     const Baselines* baselines = nullptr);

CheckRecord check_derivative_estimate(const StableLaw& law, int m, const Sweep& sweep,
                                      const Baselines* baselines = nullptr);

struct GradientQuery {
  double t;
  double x;
  double y;
};

/// Fixed examples plus `random_queries` seeded draws, m in {1, 2}.
CheckRecord check_gradient_transform(const StableLaw& law, int m, int random_queries = 20,
                                     std::uint64_t seed = 7);

CheckRecord check_route_equivalence(const StableLaw& law, int queries, std::uint64_t seed,
                                    double t_max = 50.0);

struct SolutionConfig {
  std::vector<double> alphas{0.6, 1.0, 1.5, 2.0};
  int n = 512;
  double half_width = 16.0;  ///< window for mass and flow checks
  std::vector<double> times{0.1, 0.5, 1.0};
  double mass_budget = 0.05;
  bool negative_control = false;
};

/// Mass, positivity, tail budget, two routes, stationarity, initial
/// continuity, smoothness, PDE residual and flow composition, per alpha.
std::vector<CheckRecord> check_solution_suite(const SolutionConfig& config);

/// Deliberately undersized window: its tail-budget check must fail.
CheckRecord negative_control_check();

struct MCConfig {
  double alpha = 1.0;
  double t = 1.0;
  std::size_t samples = 1000000;
  std::uint64_t seed = 42;
  int workers = 1;
  double half_width = 20.0;
  int n = 1024;
  int solver_factor = 4;  ///< solver window is this many times wider, same spacing
};

CheckRecord check_mc_agreement(const MCConfig& config);

/// Empirical characteristic function of the stable sampler against
/// exp(-|xi|^alpha) at xi in {0.5, 1, 2}, per dimension.
CheckRecord check_characteristic_function(const StableLaw& law, std::size_t samples,
                                          std::uint64_t seed);

enum class Suite { quick, full };

struct VerifyOptions {
  Suite suite = Suite::quick;
  bool negative_control = false;
  std::optional<std::filesystem::path> baselines;
  std::uint64_t seed = 42;
  int workers = 1;
};

VerificationReport run_verification(const VerifyOptions& options);

/// Constants to freeze from a report (two-sided c1, c2 and derivative C).
Baselines extract_baselines(const VerificationReport& report);

}  // namespace fracfp

#endif  // FRACFP_VERIFIER_HPP

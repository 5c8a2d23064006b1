#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracfp/field_io.hpp"
#include "fracfp/initial_data.hpp"
#include "fracfp/mc_oracle.hpp"
#include "fracfp/ou_kernel.hpp"
#include "fracfp/solver.hpp"
#include "fracfp/stable_kernel.hpp"
#include "fracfp/verifier.hpp"
#include "json.hpp"

using json = nlohmann::json;
using namespace fracfp;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags > config file > defaults; every resolved value is recorded.
class Resolver {
 public:
  Resolver(std::string command, json file) : file_(std::move(file)) { resolved_["command"] = command; }

  template <class T>
  T get(const std::string& key, const std::optional<T>& flag, T fallback) {
    T v = fallback;
    if (flag) v = *flag;
    else if (file_.contains(key)) v = file_.at(key).get<T>();
    resolved_[key] = v;
    return v;
  }

  json raw(const std::string& key) const { return file_.contains(key) ? file_.at(key) : json(); }
  void record(const std::string& key, json v) { resolved_[key] = std::move(v); }
  const json& resolved() const { return resolved_; }

 private:
  json file_;
  json resolved_;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file '" + path + "'");
  try {
    json j = json::parse(is);
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
}

std::string default_output_dir() {
  const char* env = std::getenv("FRACFP_OUTPUT_DIR");
  return env && *env ? env : "fracfp-out";
}

struct Range {
  double lo, hi;
  int count;
};

Range parse_range(const std::string& s) {
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  if (b == std::string::npos || s.find(':', b + 1) != std::string::npos)
    throw UsageError("range must look like lo:hi:count, got '" + s + "'");
  Range r{};
  try {
    r.lo = parse_double(s.substr(0, a));
    r.hi = parse_double(s.substr(a + 1, b - a - 1));
    std::size_t used = 0;
    const std::string c = s.substr(b + 1);
    r.count = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw UsageError("range must look like lo:hi:count, got '" + s + "'");
  }
  if (r.count < 1 || !(r.lo <= r.hi) || (r.count == 1 && r.lo != r.hi))
    throw UsageError("range needs lo <= hi and count >= 1, got '" + s + "'");
  return r;
}

InitialData make_data(Resolver& res, const std::optional<std::string>& preset,
                      const std::optional<std::string>& data_file, const StableLaw& law) {
  json spec;
  if (data_file) {
    std::ifstream is(*data_file);
    if (!is) throw UsageError("cannot read data file '" + *data_file + "'");
    spec = json::parse(is);
  } else if (!preset && res.raw("data").is_object()) {
    spec = res.raw("data");
  } else {
    const std::string name = preset ? *preset : res.raw("data").is_string() ? res.raw("data").get<std::string>() : "box";
    const int d = law.dim();
    const Point lo = Point::on_axis(d, 0.0);
    if (name == "box") {
      Point a = lo, b = lo;
      for (int k = 0; k < d; ++k) a[k] = -1.0, b[k] = 1.0;
      spec = InitialData::box(a, b).to_json();
    } else if (name == "gaussian") {
      spec = InitialData::gaussian(lo, 0.5).to_json();
    } else if (name == "uniform") {
      spec = InitialData::uniform(d, 1.0).to_json();
    } else if (name == "stationary") {
      spec = InitialData::stationary(law).to_json();
    } else {
      throw UsageError("unknown data preset '" + name + "' (box, gaussian, uniform, stationary)");
    }
  }
  InitialData u0 = InitialData::from_json(spec);
  if (u0.dim() != law.dim()) throw UsageError("initial data dimension differs from --dim");
  res.record("data", u0.to_json());
  return u0;
}

void commit_with_config(OutputSet& out, const Resolver& res) {
  out.add("config.json", res.resolved().dump(2) + "\n");
  for (const auto& p : out.commit()) std::cerr << "wrote " << p.string() << '\n';
}

struct KernelArgs {
  std::optional<double> alpha, t, y, tol;
  std::optional<int> dim;
  std::optional<std::string> x_range, profile;
  bool ou = false;
};

int cmd_kernel(const KernelArgs& a, Resolver& res, const std::string& dir) {
  const StableLaw law(res.get("alpha", a.alpha, 1.0), res.get("dim", a.dim, 1));
  const double t = res.get("t", a.t, 1.0);
  if (!(t > 0.0)) throw UsageError("--t must be positive");
  const Range r = parse_range(res.get<std::string>("x_range", a.x_range, "-5:5:101"));
  const std::string profile = res.get<std::string>("profile", a.profile, "kernel");
  if (profile != "kernel" && profile != "both") throw UsageError("--profile must be kernel or both");
  const bool ou = a.ou || res.raw("ou") == json(true);
  res.record("ou", ou);
  const double tol = res.get("tol", a.tol, default_tolerance(law.dim()));
  const double y = ou ? res.get("y", a.y, 0.0) : 0.0;

  std::ostringstream csv;
  csv << "x,value" << (profile == "both" ? ",bound" : "") << '\n';
  for (int i = 0; i < r.count; ++i) {
    const double x = r.count == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (r.count - 1);
    const Point px = Point::on_axis(law.dim(), x);
    double v, bound;
    if (ou) {
      v = ou_kernel(law, {t, px, Point::on_axis(law.dim(), y), tol});
      // The OU kernel is p_hat(s, x - e^{-t} y).
      const double s = effective_time(law.alpha(), t);
      bound = sharp_bound(law, s, std::abs(x - std::exp(-t) * y)).value;
    } else {
      v = heat_kernel(law, {t, px, tol});
      bound = sharp_bound(law, t, std::abs(x)).value;
    }
    csv << format_double(x) << ',' << format_double(v);
    if (profile == "both") csv << ',' << format_double(bound);
    csv << '\n';
  }
  json meta = {{"kind", ou ? "ou-kernel" : "heat-kernel"},
               {"alpha", law.alpha()},
               {"dim", law.dim()},
               {"t", t},
               {"axis", "points x e_1"},
               {"rows", r.count},
               {"tol", tol}};
  if (ou) meta["y"] = y, meta["effective_time"] = effective_time(law.alpha(), t);
  if (profile == "both") meta["bound"] = "min(t / |x|^(d+alpha), t^(-d/alpha))";
  OutputSet out(dir);
  out.add("kernel.csv", csv.str());
  out.add("kernel.json", meta.dump(2) + "\n");
  commit_with_config(out, res);
  return 0;
}

struct SolveArgs {
  std::optional<double> alpha, half_width, input_half_width, budget;
  std::optional<int> dim, n;
  std::optional<std::vector<double>> times;
  std::optional<std::string> data, data_file;
};

int cmd_solve(const SolveArgs& a, Resolver& res, const std::string& dir) {
  const StableLaw law(res.get("alpha", a.alpha, 1.0), res.get("dim", a.dim, 1));
  const double L = res.get("half_width", a.half_width, 16.0);
  const int n = res.get("n", a.n, 512);
  const std::vector<double> times = res.get<std::vector<double>>("times", a.times, {});
  if (times.empty()) throw UsageError("--times needs at least one output time");
  for (double t : times)
    if (!(t >= 0.0)) throw UsageError("output times must be nonnegative");
  const double budget = res.get("budget", a.budget, 0.05);
  const InitialData u0 = make_data(res, a.data, a.data_file, law);
  const Grid window(law.dim(), L, n);

  double t_max = 0.0;
  for (double t : times) t_max = std::max(t_max, t);
  if (u0.kind() != "stationary") {
    const DomainPlan plan = plan_domain(law, u0, t_max, L, n, budget);
    res.record("tail_mass_bound", plan.tail_mass);
    require_tail_budget(plan);
  }

  std::optional<Field> input;
  if (a.input_half_width || res.raw("input_half_width").is_number()) {
    const double Lin = res.get("input_half_width", a.input_half_width, L);
    input = u0.discretize(Grid(law.dim(), Lin, n));
  }

  OutputSet out(dir);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const Field u = input ? ou_solve(law, *input, t, window) : solve_on_window(law, u0, t, window);
    std::cout << "t=" << format_double(t) << "  mass=" << format_double(u.mass())
              << "  min=" << format_double(u.min_before_clamp()) << '\n';
    out.add_field("u_" + std::to_string(i), u, {{"alpha", law.alpha()}, {"data", u0.kind()}});
  }
  commit_with_config(out, res);
  return 0;
}

struct SimulateArgs {
  std::optional<double> alpha, t, half_width;
  std::optional<int> dim, n, workers;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> data, data_file;
  bool particles = false;
};

int cmd_simulate(const SimulateArgs& a, Resolver& res, const std::string& dir) {
  const StableLaw law(res.get("alpha", a.alpha, 1.0), res.get("dim", a.dim, 1));
  const double t = res.get("t", a.t, 1.0);
  if (!(t >= 0.0)) throw UsageError("--t must be nonnegative");
  const std::size_t samples = res.get<std::size_t>("samples", a.samples, 1000000);
  if (samples < 1) throw UsageError("--samples must be at least 1");
  const std::uint64_t seed = res.get<std::uint64_t>("seed", a.seed, 42);
  const int workers = res.get("workers", a.workers, 1);
  if (workers < 1) throw UsageError("--workers must be at least 1");
  const Grid grid(law.dim(), res.get("half_width", a.half_width, 20.0), res.get("n", a.n, 1024));
  const InitialData u0 = make_data(res, a.data, a.data_file, law);

  const Ensemble e = simulate_ensemble(law, u0, t, samples, seed, workers);
  const Histogram h = empirical_density(e, grid);
  if (h.warning)
    std::cerr << "warning: " << format_double(100.0 * h.outside_mass) << "% of the particles left the grid\n";
  std::cout << "samples=" << samples << "  outside=" << h.outside
            << "  grid_mass=" << format_double(h.density.mass()) << '\n';

  OutputSet out(dir);
  out.add_field("histogram", h.density,
                {{"seed", seed}, {"samples", samples}, {"outside", h.outside},
                 {"outside_mass", h.outside_mass}, {"alpha", law.alpha()}, {"data", u0.kind()}});
  out.add_field("histogram_se", h.standard_error);
  if (a.particles || res.raw("particles") == json(true)) {
    std::ostringstream os;
    write_ensemble_csv(os, e);
    out.add("particles.csv", os.str());
  }
  res.record("particles", a.particles || res.raw("particles") == json(true));
  commit_with_config(out, res);
  return 0;
}

struct VerifyArgs {
  std::optional<std::string> suite, baselines;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool negative_control = false;
  bool write_baselines = false;
};

int cmd_verify(const VerifyArgs& a, Resolver& res, const std::string& dir) {
  VerifyOptions opt;
  const std::string suite = res.get<std::string>("suite", a.suite, "quick");
  if (suite != "quick" && suite != "full") throw UsageError("--suite must be quick or full");
  opt.suite = suite == "full" ? Suite::full : Suite::quick;
  opt.negative_control = a.negative_control || res.raw("negative_control") == json(true);
  res.record("negative_control", opt.negative_control);
  opt.seed = res.get<std::uint64_t>("seed", a.seed, 42);
  opt.workers = res.get("workers", a.workers, 1);
  const std::string base = res.get<std::string>("baselines", a.baselines, FRACFP_GOLDEN_DIR "/baselines.json");
  if (!base.empty() && !a.write_baselines) opt.baselines = base;

  const VerificationReport rep = run_verification(opt);
  const std::string text = rep.to_text();
  std::cout << text;
  OutputSet out(dir);
  out.add("report.json", rep.to_json().dump(2) + "\n");
  out.add("report.txt", text);
  if (a.write_baselines) out.add("baselines.json", extract_baselines(rep).data.dump(2) + "\n");
  commit_with_config(out, res);
  return rep.all_pass() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Fokker-Planck kernels, solver, Monte Carlo oracle and verifier"};
  app.require_subcommand(1);
  std::string config_path, out_dir = default_output_dir();
  app.add_option("--config", config_path, "JSON file of option values (flags take precedence)");
  app.add_option("--out", out_dir, "output directory (default $FRACFP_OUTPUT_DIR or ./fracfp-out)");

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "tabulate the heat kernel or the OU kernel along x e_1");
  kernel->add_option("--alpha", ka.alpha, "stability index in (0, 2]");
  kernel->add_option("--dim", ka.dim, "dimension 1..3");
  kernel->add_option("--t", ka.t, "time");
  kernel->add_option("--x-range", ka.x_range, "lo:hi:count");
  kernel->add_flag("--ou", ka.ou, "OU kernel p(t, x, y) instead of p_hat(t, x)");
  kernel->add_option("--y", ka.y, "source point y e_1 of the OU kernel");
  kernel->add_option("--profile", ka.profile, "kernel | both (adds the bound column)");
  kernel->add_option("--tol", ka.tol, "absolute quadrature tolerance");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "solve the Cauchy problem on a periodic grid");
  solve->add_option("--alpha", sa.alpha, "stability index in (0, 2]");
  solve->add_option("--dim", sa.dim, "dimension 1..3");
  solve->add_option("--half-width", sa.half_width, "output window half-width L");
  solve->add_option("--n", sa.n, "points per axis (power of two)");
  solve->add_option("--times", sa.times, "output times")->expected(0, -1);
  solve->add_option("--data", sa.data, "preset: box, gaussian, uniform, stationary");
  solve->add_option("--data-file", sa.data_file, "JSON initial-data spec");
  solve->add_option("--budget", sa.budget, "tail-mass budget for the window");
  solve->add_option("--input-half-width", sa.input_half_width,
                    "explicit input grid; must satisfy e^t L <= L_in");

  SimulateArgs ma;
  auto* sim = app.add_subcommand("simulate", "exact-step particle ensemble and its histogram");
  sim->add_option("--alpha", ma.alpha, "stability index in (0, 2]");
  sim->add_option("--dim", ma.dim, "dimension 1..3");
  sim->add_option("--t", ma.t, "time");
  sim->add_option("--samples", ma.samples, "number of particles");
  sim->add_option("--seed", ma.seed, "random seed");
  sim->add_option("--workers", ma.workers, "threads (output does not depend on it)");
  sim->add_option("--half-width", ma.half_width, "histogram window half-width");
  sim->add_option("--n", ma.n, "bins per axis (power of two)");
  sim->add_option("--data", ma.data, "preset: box, gaussian, uniform, stationary");
  sim->add_option("--data-file", ma.data_file, "JSON initial-data spec");
  sim->add_flag("--particles", ma.particles, "also write particle positions");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the verification checks");
  verify->add_option("--suite", va.suite, "quick | full");
  verify->add_flag("--negative-control", va.negative_control, "add a check that must fail");
  verify->add_option("--baselines", va.baselines, "frozen constants (empty string disables)");
  verify->add_option("--seed", va.seed, "random seed");
  verify->add_option("--workers", va.workers, "threads for the Monte Carlo checks");
  verify->add_flag("--write-baselines", va.write_baselines, "emit baselines.json from this run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const json file = load_config(config_path);
    if (*kernel) {
      Resolver res("kernel", file);
      return cmd_kernel(ka, res, out_dir);
    }
    if (*solve) {
      Resolver res("solve", file);
      return cmd_solve(sa, res, out_dir);
    }
    if (*sim) {
      Resolver res("simulate", file);
      return cmd_simulate(ma, res, out_dir);
    }
    Resolver res("verify", file);
    return cmd_verify(va, res, out_dir);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "bad JSON value: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

#include "fracfp/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fracfp/field_io.hpp"
#include "fracfp/ou_kernel.hpp"

namespace fracfp {

namespace {

constexpr double kPi = std::numbers::pi;

double cms_symmetric(double alpha, StreamRng& rng) {
  if (alpha == 2.0) return std::sqrt(2.0) * rng.normal();
  const double v = kPi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

}  // namespace

double sample_positive_stable(double beta, StreamRng& rng) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
  if (beta == 1.0) return 1.0;
  const double u = rng.uniform_open();
  const double e = rng.exponential();
  const double a = std::pow(std::pow(std::sin(beta * kPi * u), beta) *
                                std::pow(std::sin((1.0 - beta) * kPi * u), 1.0 - beta) /
                                std::sin(kPi * u),
                            1.0 / (1.0 - beta));
  return std::pow(a / e, (1.0 - beta) / beta);
}

Point sample_standard_stable(const StableLaw& law, StreamRng& rng) {
  const int d = law.dim();
  Point p = Point::on_axis(d, 0.0);
  if (d == 1) {
    p[0] = cms_symmetric(law.alpha(), rng);
    return p;
  }
  const double scale = std::sqrt(kSubordinatorScale * sample_positive_stable(0.5 * law.alpha(), rng));
  for (int k = 0; k < d; ++k) p[k] = scale * rng.normal();
  return p;
}

Point ou_step(const Point& x, double dt, const StableLaw& law, StreamRng& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("step length must be positive");
  const double spread = std::pow(effective_time(law.alpha(), dt), 1.0 / law.alpha());
  return x * std::exp(-dt) + sample_standard_stable(law, rng) * spread;
}

InitialSampler::InitialSampler(const InitialData& u0) : u0_(&u0) {
  if (const auto* s = std::get_if<SampledData>(&u0.spec())) {
    const auto v = s->field.values();
    cdf_.resize(v.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) cdf_[i] = acc += std::max(v[i], 0.0);
    if (!(acc > 0.0)) throw std::invalid_argument("sampled data has no mass");
    for (double& c : cdf_) c /= acc;
  }
}

Point InitialSampler::operator()(StreamRng& rng) const {
  const InitialData& u0 = *u0_;
  const int d = u0.dim();
  Point p = Point::on_axis(d, 0.0);
  if (const auto* b = std::get_if<BoxData>(&u0.spec())) {
    for (int k = 0; k < d; ++k) p[k] = b->lo[k] + (b->hi[k] - b->lo[k]) * rng.uniform();
  } else if (const auto* u = std::get_if<UniformData>(&u0.spec())) {
    for (int k = 0; k < d; ++k) p[k] = u->half_width * (2.0 * rng.uniform() - 1.0);
  } else if (const auto* g = std::get_if<GaussianMixtureData>(&u0.spec())) {
    double pick = rng.uniform();
    const GaussianComponent* c = &g->components.back();
    for (const auto& comp : g->components) {
      if (pick < comp.weight) {
        c = &comp;
        break;
      }
      pick -= comp.weight;
    }
    for (int k = 0; k < d; ++k) p[k] = c->mean[k] + c->sigma * rng.normal();
  } else if (const auto* s = std::get_if<StationaryData>(&u0.spec())) {
    const double a = s->law.alpha();
    p = sample_standard_stable(s->law, rng) * std::pow(1.0 / a, 1.0 / a);
  } else {
    const auto& f = std::get<SampledData>(u0.spec()).field;
    const double r = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), r);
    const std::size_t cell = std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
    const Point centre = f.grid().point(cell);
    const double h = f.grid().spacing();
    for (int k = 0; k < d; ++k) p[k] = centre[k] + h * (rng.uniform() - 0.5);
  }
  return p;
}

Point Ensemble::position(std::size_t i) const {
  Point p = Point::on_axis(dim, 0.0);
  for (int k = 0; k < dim; ++k) p[k] = positions[i * dim + k];
  return p;
}

Ensemble simulate_ensemble(const StableLaw& law, const InitialData& u0, double t, std::size_t n,
                           std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("ensemble needs at least one particle");
  if (t < 0.0) throw std::invalid_argument("simulation time must be nonnegative");
  if (u0.dim() != law.dim()) throw std::invalid_argument("initial data and law differ in dimension");
  const int d = law.dim();
  Ensemble e{d, law.alpha(), t, seed, n, std::vector<double>(n * d)};
  const InitialSampler draw(u0);
  const std::size_t blocks = (n + kEnsembleBlock - 1) / kEnsembleBlock;
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      StreamRng rng({seed, b});
      const std::size_t end = std::min(n, (b + 1) * kEnsembleBlock);
      for (std::size_t i = b * kEnsembleBlock; i < end; ++i) {
        Point x = draw(rng);
        if (t > 0.0) x = ou_step(x, t, law, rng);
        for (int k = 0; k < d; ++k) e.positions[i * d + k] = x[k];
      }
    }
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(blocks)));
  std::vector<std::thread> pool;
  for (int i = 1; i < w; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return e;
}

void write_ensemble_csv(std::ostream& os, const Ensemble& e) {
  static const char* names[] = {"x", "y", "z"};
  os << "# seed=" << e.seed << ", n=" << e.n << ", alpha=" << format_double(e.alpha)
     << ", dim=" << e.dim << ", t=" << format_double(e.time) << '\n';
  for (int k = 0; k < e.dim; ++k) os << (k ? "," : "") << names[k];
  os << '\n';
  for (std::size_t i = 0; i < e.n; ++i) {
    for (int k = 0; k < e.dim; ++k) os << (k ? "," : "") << format_double(e.positions[i * e.dim + k]);
    os << '\n';
  }
}

Ensemble read_ensemble_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
    throw std::invalid_argument("ensemble CSV lacks its metadata line");
  Ensemble e;
  std::istringstream meta(line.substr(2));
  std::string item;
  while (std::getline(meta, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    std::string key = item.substr(0, eq);
    key.erase(0, key.find_first_not_of(' '));
    const std::string val = item.substr(eq + 1);
    if (key == "seed") e.seed = std::stoull(val);
    else if (key == "n") e.n = std::stoull(val);
    else if (key == "alpha") e.alpha = parse_double(val);
    else if (key == "dim") e.dim = std::stoi(val);
    else if (key == "t") e.time = parse_double(val);
  }
  std::getline(is, line);  // column names
  e.positions.reserve(e.n * e.dim);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t start = 0;
    for (int k = 0; k < e.dim; ++k) {
      const std::size_t end = line.find(',', start);
      e.positions.push_back(parse_double(std::string_view(line).substr(start, end - start)));
      start = end + 1;
    }
  }
  if (e.positions.size() != e.n * static_cast<std::size_t>(e.dim))
    throw std::invalid_argument("ensemble CSV row count does not match its header");
  return e;
}

Histogram empirical_density(const Ensemble& e, const Grid& grid) {
  if (grid.dim() != e.dim) throw std::invalid_argument("grid and ensemble differ in dimension");
  const double h = grid.spacing();
  const int n = grid.n();
  std::vector<double> counts(grid.size(), 0.0);
  std::size_t outside = 0;
  for (std::size_t i = 0; i < e.n; ++i) {
    std::array<int, 3> idx{0, 0, 0};
    bool in = true;
    for (int k = 0; k < e.dim && in; ++k) {
      const double c = std::floor(e.positions[i * e.dim + k] / h + 0.5 * n + 0.5);
      in = c >= 0.0 && c < n;
      if (in) idx[k] = static_cast<int>(c);
    }
    if (in) counts[grid.flat(idx)] += 1.0;
    else ++outside;
  }
  const double total = static_cast<double>(e.n);
  const double vol = grid.cell_volume();
  std::vector<double> dens(grid.size()), se(grid.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double p = counts[i] / total;
    dens[i] = p / vol;
    se[i] = std::sqrt(p * (1.0 - p) / total) / vol;
  }
  Histogram hst{Field(grid, std::move(dens), e.time), Field(grid, std::move(se), e.time)};
  hst.outside = outside;
  hst.outside_mass = outside / total;
  hst.warning = hst.outside_mass > 0.01;
  return hst;
}

Field binomial_errors(const Field& model, std::size_t n) {
  const double vol = model.grid().cell_volume();
  std::vector<double> se(model.grid().size());
  for (std::size_t i = 0; i < se.size(); ++i) {
    const double p = std::clamp(model[i] * vol, 0.0, 1.0);
    se[i] = std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / vol;
  }
  return Field(model.grid(), std::move(se), model.time());
}

Comparison compare_densities(const Field& a, const Field& b, const Field& errors, double k) {
  if (!(a.grid() == b.grid()) || !(a.grid() == errors.grid()))
    throw std::invalid_argument("compared densities live on different grids");
  Comparison c;
  const double vol = a.grid().cell_volume();
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    c.sup = std::max(c.sup, diff);
    c.l1 += diff * vol;
    if (diff == 0.0) continue;
    const double z = errors[i] > 0.0 ? diff / errors[i] : std::numeric_limits<double>::infinity();
    c.worst_z = std::max(c.worst_z, z);
    if (z > k) ++c.exceeding;
  }
  c.pass = c.exceeding == 0;
  return c;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = a.size(), nb = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_critical_5pct(std::size_t n, std::size_t m) {
  return 1.358 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

}  // namespace fracfp

#include "fracfp/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracfp/ou_kernel.hpp"
#include "fracfp/spectral.hpp"

namespace fracfp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double box_volume(const Point& lo, const Point& hi) {
  double v = 1.0;
  for (int k = 0; k < lo.dim(); ++k) v *= hi[k] - lo[k];
  return v;
}

double gaussian_1d(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

std::vector<double> box_cell_averages(const Grid& g, const Point& lo, const Point& hi) {
  const double h = g.spacing();
  const double height = 1.0 / box_volume(lo, hi);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point x = g.point(i);
    double frac = 1.0;
    for (int k = 0; k < g.dim() && frac > 0.0; ++k)
      frac *= overlap(x[k] - 0.5 * h, x[k] + 0.5 * h, lo[k], hi[k]) / h;
    v[i] = height * frac;
  }
  return v;
}

Point json_point(const nlohmann::json& j) {
  const auto c = j.get<std::vector<double>>();
  if (c.size() == 1) return {c[0]};
  if (c.size() == 2) return {c[0], c[1]};
  if (c.size() == 3) return {c[0], c[1], c[2]};
  throw std::invalid_argument("points need 1 to 3 coordinates");
}

nlohmann::json point_json(const Point& p) {
  std::vector<double> c(p.dim());
  for (int k = 0; k < p.dim(); ++k) c[k] = p[k];
  return c;
}

void renormalize(std::vector<double>& v, double cell_volume) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mass = sum * cell_volume;
  if (!(mass > 0.0)) throw ConfigError("initial data has no mass on the grid");
  for (double& x : v) x /= mass;
}

}  // namespace

InitialData InitialData::box(Point lo, Point hi) {
  if (lo.dim() != hi.dim()) throw std::invalid_argument("box corners differ in dimension");
  for (int k = 0; k < lo.dim(); ++k)
    if (!(hi[k] > lo[k])) throw std::invalid_argument("box must have positive extent");
  return InitialData(BoxData{lo, hi});
}

InitialData InitialData::gaussian(Point mean, double sigma) {
  return gaussian_mixture({{1.0, mean, sigma}});
}

InitialData InitialData::gaussian_mixture(std::vector<GaussianComponent> components) {
  if (components.empty()) throw std::invalid_argument("mixture needs a component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0) || !(c.sigma > 0.0))
      throw std::invalid_argument("mixture weights and widths must be positive");
    if (c.mean.dim() != components.front().mean.dim())
      throw std::invalid_argument("mixture components differ in dimension");
    total += c.weight;
  }
  for (auto& c : components) c.weight /= total;
  return InitialData(GaussianMixtureData{std::move(components)});
}

InitialData InitialData::uniform(int dim, double half_width) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (!(half_width > 0.0)) throw std::invalid_argument("uniform support must be nonempty");
  return InitialData(UniformData{dim, half_width});
}

InitialData InitialData::stationary(const StableLaw& law, double tol) {
  return InitialData(StationaryData{law, tol});
}

InitialData InitialData::samples(Field field) {
  if (field.min() < 0.0) throw std::invalid_argument("sampled initial data must be nonnegative");
  return InitialData(SampledData{std::move(field)});
}

std::string InitialData::kind() const {
  return std::visit(overloaded{[](const BoxData&) { return "indicator-box"; },
                               [](const GaussianMixtureData&) { return "gaussian-mixture"; },
                               [](const UniformData&) { return "uniform"; },
                               [](const StationaryData&) { return "stationary"; },
                               [](const SampledData&) { return "custom-samples"; }},
                    spec_);
}

int InitialData::dim() const {
  return std::visit(overloaded{[](const BoxData& b) { return b.lo.dim(); },
                               [](const GaussianMixtureData& g) {
                                 return g.components.front().mean.dim();
                               },
                               [](const UniformData& u) { return u.dim; },
                               [](const StationaryData& s) { return s.law.dim(); },
                               [](const SampledData& s) { return s.field.grid().dim(); }},
                    spec_);
}

double InitialData::value(const Point& x) const {
  return std::visit(
      overloaded{
          [&](const BoxData& b) {
            for (int k = 0; k < b.lo.dim(); ++k)
              if (x[k] < b.lo[k] || x[k] > b.hi[k]) return 0.0;
            return 1.0 / box_volume(b.lo, b.hi);
          },
          [&](const GaussianMixtureData& g) {
            double acc = 0.0;
            for (const auto& c : g.components) {
              double p = c.weight;
              for (int k = 0; k < c.mean.dim(); ++k) p *= gaussian_1d(x[k], c.mean[k], c.sigma);
              acc += p;
            }
            return acc;
          },
          [&](const UniformData& u) {
            for (int k = 0; k < u.dim; ++k)
              if (std::abs(x[k]) > u.half_width) return 0.0;
            return std::pow(2.0 * u.half_width, -u.dim);
          },
          [&](const StationaryData& s) { return stationary_density(s.law, x, s.tol); },
          [&](const SampledData& s) { return std::max(0.0, interpolate(s.field, x)); }},
      spec_);
}

bool InitialData::is_continuity_point(const Point& x) const {
  auto off_faces = [&](const Point& lo, const Point& hi) {
    const double eps = 1e-12 * std::max(1.0, box_volume(lo, hi));
    for (int k = 0; k < lo.dim(); ++k) {
      const bool inside = x[k] >= lo[k] - eps && x[k] <= hi[k] + eps;
      if (!inside) continue;
      if (std::abs(x[k] - lo[k]) <= eps || std::abs(x[k] - hi[k]) <= eps) {
        bool on_face = true;
        for (int j = 0; j < lo.dim(); ++j)
          if (j != k) on_face = on_face && x[j] >= lo[j] - eps && x[j] <= hi[j] + eps;
        if (on_face) return false;
      }
    }
    return true;
  };
  return std::visit(overloaded{[&](const BoxData& b) { return off_faces(b.lo, b.hi); },
                               [&](const UniformData& u) {
                                 Point lo = Point::on_axis(u.dim, 0.0), hi = lo;
                                 for (int k = 0; k < u.dim; ++k) {
                                   lo[k] = -u.half_width;
                                   hi[k] = u.half_width;
                                 }
                                 return off_faces(lo, hi);
                               },
                               [](const GaussianMixtureData&) { return true; },
                               [](const StationaryData&) { return true; },
                               [](const SampledData&) { return true; }},
                    spec_);
}

bool InitialData::renormalized_on_grid() const {
  return !std::holds_alternative<StationaryData>(spec_);
}

std::optional<double> InitialData::support_radius() const {
  return std::visit(
      overloaded{[](const BoxData& b) -> std::optional<double> {
                   double r2 = 0.0;
                   for (int k = 0; k < b.lo.dim(); ++k) {
                     const double m = std::max(std::abs(b.lo[k]), std::abs(b.hi[k]));
                     r2 += m * m;
                   }
                   return std::sqrt(r2);
                 },
                 [](const UniformData& u) -> std::optional<double> {
                   return u.half_width * std::sqrt(static_cast<double>(u.dim));
                 },
                 [](const auto&) -> std::optional<double> { return std::nullopt; }},
      spec_);
}

Field InitialData::discretize(const Grid& g) const {
  if (g.dim() != dim()) throw std::invalid_argument("grid and initial data differ in dimension");
  std::vector<double> v = std::visit(
      overloaded{
          [&](const BoxData& b) { return box_cell_averages(g, b.lo, b.hi); },
          [&](const UniformData& u) {
            // Support covering the whole period: constant under periodic identification.
            if (u.half_width >= g.half_width() * (1.0 - 1e-12))
              return std::vector<double>(g.size(), std::pow(2.0 * g.half_width(), -u.dim));
            Point lo = Point::on_axis(u.dim, 0.0), hi = lo;
            for (int k = 0; k < u.dim; ++k) {
              lo[k] = -u.half_width;
              hi[k] = u.half_width;
            }
            return box_cell_averages(g, lo, hi);
          },
          [&](const GaussianMixtureData&) {
            std::vector<double> out(g.size());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(g.point(i));
            return out;
          },
          [&](const StationaryData& s) {
            const Field p = periodic_heat_kernel(s.law, 1.0 / s.law.alpha(), g);
            return std::vector<double>(p.values().begin(), p.values().end());
          },
          [&](const SampledData& s) {
            const Field r = resample(s.field, g);
            std::vector<double> out(r.values().begin(), r.values().end());
            for (double& x : out) x = std::max(x, 0.0);
            return out;
          }},
      spec_);
  if (renormalized_on_grid()) renormalize(v, g.cell_volume());
  return Field(g, std::move(v), 0.0);
}

nlohmann::json InitialData::to_json() const {
  nlohmann::json j;
  j["kind"] = kind();
  std::visit(overloaded{[&](const BoxData& b) {
                          j["lo"] = point_json(b.lo);
                          j["hi"] = point_json(b.hi);
                        },
                        [&](const GaussianMixtureData& g) {
                          j["components"] = nlohmann::json::array();
                          for (const auto& c : g.components)
                            j["components"].push_back(
                                {{"weight", c.weight}, {"mean", point_json(c.mean)}, {"sigma", c.sigma}});
                        },
                        [&](const UniformData& u) {
                          j["dim"] = u.dim;
                          j["half_width"] = u.half_width;
                        },
                        [&](const StationaryData& s) {
                          j["alpha"] = s.law.alpha();
                          j["dim"] = s.law.dim();
                          j["tol"] = s.tol;
                        },
                        [&](const SampledData& s) {
                          const Grid& g = s.field.grid();
                          j["grid"] = {{"dim", g.dim()}, {"half_width", g.half_width()}, {"n", g.n()}};
                          j["values"] = std::vector<double>(s.field.values().begin(),
                                                            s.field.values().end());
                        }},
             spec_);
  return j;
}

InitialData InitialData::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "indicator-box" || kind == "box")
    return box(json_point(j.at("lo")), json_point(j.at("hi")));
  if (kind == "gaussian-mixture" || kind == "gaussian") {
    if (j.contains("components")) {
      std::vector<GaussianComponent> comps;
      for (const auto& c : j.at("components"))
        comps.push_back({c.value("weight", 1.0), json_point(c.at("mean")), c.at("sigma").get<double>()});
      return gaussian_mixture(std::move(comps));
    }
    return gaussian(json_point(j.at("mean")), j.at("sigma").get<double>());
  }
  if (kind == "uniform") return uniform(j.at("dim").get<int>(), j.at("half_width").get<double>());
  if (kind == "stationary")
    return stationary(StableLaw(j.at("alpha").get<double>(), j.at("dim").get<int>()),
                      j.value("tol", 1e-12));
  if (kind == "custom-samples") {
    const auto& g = j.at("grid");
    Grid grid(g.at("dim").get<int>(), g.at("half_width").get<double>(), g.at("n").get<int>());
    return samples(Field(grid, j.at("values").get<std::vector<double>>()));
  }
  throw std::invalid_argument("unknown initial data kind '" + kind + "'");
}

}  // namespace fracfp

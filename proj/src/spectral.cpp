#include "fracfp/spectral.hpp"

#include <cmath>
#include <algorithm>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace fracfp {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

class Transform {
 public:
  explicit Transform(const Grid& g) : grid_(g) {
    const int d = g.dim();
    dims_ = {g.n(), g.n(), g.n()};
    real_size_ = g.size();
    complex_size_ = real_size_ / g.n() * (g.n() / 2 + 1);
    real_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * real_size_)));
    spec_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * complex_size_)));
    if (!real_ || !spec_) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c(d, dims_.data(), real_.get(), spec_.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r(d, dims_.data(), spec_.get(), real_.get(), FFTW_ESTIMATE);
  }
  ~Transform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  // m receives the wavenumber vector and per-axis Nyquist flags.
  template <class F>
  std::vector<double> run(std::span<const double> in, const F& m) {
    std::copy(in.begin(), in.end(), real_.get());
    fftw_execute(forward_);
    const Grid& g = grid_;
    const int n = g.n();
    const int d = g.dim();
    const int last = n / 2 + 1;
    const double k0 = std::numbers::pi / g.half_width();
    std::size_t c = 0;
    const int n0 = n, n1 = d > 1 ? n : 1, n2 = d > 2 ? n : 1;
    // Row-major complex layout: leading axes full length, last axis halved.
    const int e0 = d == 1 ? last : n0;
    const int e1 = d == 2 ? last : n1;
    const int e2 = d == 3 ? last : n2;
    auto wave = [&](int j) { return j <= n / 2 ? j : j - n; };
    for (int a = 0; a < e0; ++a)
      for (int b = 0; b < e1; ++b)
        for (int cc = 0; cc < e2; ++cc, ++c) {
          std::array<double, 3> xi{0.0, 0.0, 0.0};
          std::array<bool, 3> nyq{false, false, false};
          const int js[3] = {a, b, cc};
          for (int k = 0; k < d; ++k) {
            xi[k] = k0 * wave(js[k]);
            nyq[k] = js[k] == n / 2;
          }
          const std::complex<double> z(spec_.get()[c][0], spec_.get()[c][1]);
          const std::complex<double> w = m(xi, nyq) * z;
          spec_.get()[c][0] = w.real();
          spec_.get()[c][1] = w.imag();
        }
    fftw_execute(backward_);
    std::vector<double> out(real_.get(), real_.get() + real_size_);
    const double scale = 1.0 / static_cast<double>(real_size_);
    for (double& v : out) v *= scale;
    return out;
  }

 private:
  Grid grid_;
  std::array<int, 3> dims_;
  std::size_t real_size_;
  std::size_t complex_size_;
  std::unique_ptr<double, FftwFree> real_;
  std::unique_ptr<fftw_complex, FftwFree> spec_;
  fftw_plan forward_;
  fftw_plan backward_;
};

double norm_of(const std::array<double, 3>& xi) {
  return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
}

}  // namespace

Field apply_multiplier(const Field& f, const Multiplier& m) {
  Transform tr(f.grid());
  auto out = tr.run(f.values(), [&](const std::array<double, 3>& xi, const std::array<bool, 3>&) {
    return std::complex<double>(m(xi, norm_of(xi)), 0.0);
  });
  return Field(f.grid(), std::move(out), f.time());
}

Field heat_multiplier(const StableLaw& law, const Field& f, double tau) {
  const double a = law.alpha();
  return apply_multiplier(f, [&](const std::array<double, 3>&, double r) {
    return r == 0.0 ? 1.0 : std::exp(-tau * std::pow(r, a));
  });
}

Field fractional_laplacian(const StableLaw& law, const Field& f) {
  const double a = law.alpha();
  return apply_multiplier(f, [&](const std::array<double, 3>&, double r) {
    return r == 0.0 ? 0.0 : -std::pow(r, a);
  });
}

Field spectral_derivative(const Field& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw std::invalid_argument("axis out of range");
  Transform tr(f.grid());
  auto out = tr.run(f.values(), [&](const std::array<double, 3>& xi, const std::array<bool, 3>& nyq) {
    if (nyq[axis]) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, xi[axis]);
  });
  return Field(f.grid(), std::move(out), f.time());
}

Field periodic_heat_kernel(const StableLaw& law, double tau, const Grid& g) {
  std::vector<double> delta(g.size(), 0.0);
  const int half = g.n() / 2;
  delta[g.flat({half, g.dim() > 1 ? half : 0, g.dim() > 2 ? half : 0})] = 1.0 / g.cell_volume();
  return heat_multiplier(law, Field(g, std::move(delta)), tau);
}

}  // namespace fracfp

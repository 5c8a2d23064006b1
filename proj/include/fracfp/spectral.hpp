#ifndef FRACFP_SPECTRAL_HPP
#define FRACFP_SPECTRAL_HPP

#include <array>
#include <functional>

#include "fracfp/grid.hpp"
#include "fracfp/stable_law.hpp"

namespace fracfp {

/// Real multiplier m(xi, |xi|) on the physical wavenumbers xi = pi k / L.
using Multiplier = std::function<double(const std::array<double, 3>& xi, double norm)>;

/// Inverse DFT of m(xi) times the DFT of f.
Field apply_multiplier(const Field& f, const Multiplier& m);

/// Multiplier exp(-tau |xi|^alpha); the zero mode is untouched.
Field heat_multiplier(const StableLaw& law, const Field& f, double tau);

/// Multiplier -|xi|^alpha.
Field fractional_laplacian(const StableLaw& law, const Field& f);

/// Multiplier i xi_axis, Nyquist mode dropped.
Field spectral_derivative(const Field& f, int axis);

/// Periodization sum_m p_hat(tau, x + 2 L m) at the nodes, synthesized from
/// its Fourier series (exact up to the modes beyond Nyquist).
Field periodic_heat_kernel(const StableLaw& law, double tau, const Grid& g);

}  // namespace fracfp

#endif  // FRACFP_SPECTRAL_HPP

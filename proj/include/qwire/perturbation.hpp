#pragma once

// First-order perturbation theory around the unit circle: linear response
// of the tangential Hamiltonian to the deformation parameters, corrected
// ground states, and the Berry curvature they imply.

#include <cmath>
#include <vector>

#include "qwire/curve_geometry.hpp"
#include "qwire/linalg.hpp"
#include "qwire/spectral.hpp"
#include "qwire/tangential_hamiltonian.hpp"

namespace qwire {

/// dH/d(direction) at xi = zeta = 0 for one sigma sector.
struct PerturbationOperator {
  Matrix matrix;
  Direction direction = Direction::xi;
  int sigma = 1;
};

struct FirstOrderResponse {
  PerturbationOperator xi;
  PerturbationOperator zeta;
  SGrid grid;
};

struct ExtractionOptions {
  double step = 1e-5;
  TorsionConvention convention = TorsionConvention::standard;
};

/// Symmetric difference of build_hamiltonian in each parameter at the
/// origin with one Richardson level (steps h and h/2).
inline FirstOrderResponse extract_h1(const DeformableCurve& curve, int sigma, const SGrid& grid,
                                     const ExtractionOptions& opts = {}) {
  check_sigma(sigma);
  auto at = [&](ParamPoint p) {
    return build_hamiltonian(curve, p, sigma, grid, opts.convention).matrix;
  };
  auto central = [&](Direction d, double h) {
    const ParamPoint plus = d == Direction::xi ? ParamPoint{h, 0.0} : ParamPoint{0.0, h};
    const ParamPoint minus = d == Direction::xi ? ParamPoint{-h, 0.0} : ParamPoint{0.0, -h};
    return (1.0 / (2.0 * h)) * (at(plus) - at(minus));
  };
  auto derivative = [&](Direction d) {
    const Matrix coarse = central(d, opts.step);
    const Matrix fine = central(d, 0.5 * opts.step);
    return (1.0 / 3.0) * (4.0 * fine - coarse);
  };
  return {{derivative(Direction::xi), Direction::xi, sigma},
          {derivative(Direction::zeta), Direction::zeta, sigma},
          grid};
}

/// Closed-form response of the standard family on the grid:
///   xi:   (3/4) cos 2s
///   zeta: 6 i sigma (sin 2s d/ds + cos 2s)
inline PerturbationOperator analytic_h1(Direction d, int sigma, const SGrid& grid) {
  check_sigma(sigma);
  const std::size_t n = grid.size();
  Matrix m(n, n);
  if (d == Direction::xi) {
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.75 * std::cos(2.0 * grid.s(i));
  } else {
    const Matrix d1 = first_derivative_matrix(grid);
    const Complex c = 6.0 * I * static_cast<double>(sigma);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = grid.s(i);
      for (std::size_t j = 0; j < n; ++j) m(i, j) = c * std::sin(2.0 * s) * d1(i, j);
      m(i, i) += c * std::cos(2.0 * s);
    }
  }
  return {std::move(m), d, sigma};
}

/// Unperturbed circle level k: k^2/2 - 1/8.
inline double circle_level(int k) { return 0.5 * k * k - 0.125; }

/// Ground state corrected to first order, with its plane-wave coefficients
/// (basis e^{iks}/sqrt(2 pi), indexed by DFT bin).
struct CorrectedState {
  CVector samples;
  CVector coefficients;
  ParamPoint point;
  int sigma = 1;
  SGrid grid{16};

  Complex coefficient(int k) const { return coefficients[grid.bin(k)]; }

  /// a in psi ~ 1 + a cos 2s + ..., relative to the constant component.
  Complex cos2s_coefficient() const {
    return (coefficient(2) + coefficient(-2)) / coefficient(0);
  }
};

namespace detail {

inline CVector plane_wave_components(const SGrid& g, std::span<const Complex> v) {
  CVector c(g.size());
  for (std::size_t b = 0; b < g.size(); ++b)
    c[b] = grid_inner(g, plane_wave(g, g.wavenumber(b)), v);
  return c;
}

}  // namespace detail

/// Plane-wave coefficients of sum_{k != 0} |k><k|V|0> / (E_0 - E_k).
inline CVector first_order_correction(const SGrid& g, const Matrix& v) {
  const CVector applied = v * plane_wave(g, 0);
  CVector c = detail::plane_wave_components(g, applied);
  const double e0 = circle_level(0);
  for (std::size_t b = 0; b < g.size(); ++b) {
    const int k = g.wavenumber(b);
    c[b] = k == 0 ? Complex{} : c[b] / (e0 - circle_level(k));
  }
  return c;
}

inline CVector samples_from_plane_waves(const SGrid& g, std::span<const Complex> c) {
  CVector out(g.size());
  for (std::size_t b = 0; b < g.size(); ++b) {
    const CVector w = plane_wave(g, g.wavenumber(b));
    for (std::size_t j = 0; j < g.size(); ++j) out[j] += c[b] * w[j];
  }
  return out;
}

/// Rayleigh-Schroedinger first order in xi H1_xi + zeta H1_zeta, normalized.
inline CorrectedState first_order_state(const FirstOrderResponse& h1, ParamPoint p) {
  const SGrid& g = h1.grid;
  const Matrix v = p.xi * h1.xi.matrix + p.zeta * h1.zeta.matrix;
  CVector c = first_order_correction(g, v);
  c[g.bin(0)] = 1.0;
  double nrm = 0.0;
  for (const auto& x : c) nrm += std::norm(x);
  nrm = std::sqrt(nrm);
  for (auto& x : c) x /= nrm;
  return {samples_from_plane_waves(g, c), std::move(c), p, h1.xi.sigma, g};
}

/// i <d_xi psi | d_zeta psi> at the origin, from first-order derivatives.
/// Returns the real part; the imaginary part vanishes for Hermitian H1.
inline double berry_curvature_first_order(const SGrid& g, const Matrix& h1_xi,
                                          const Matrix& h1_zeta) {
  const CVector dxi = samples_from_plane_waves(g, first_order_correction(g, h1_xi));
  const CVector dzeta = samples_from_plane_waves(g, first_order_correction(g, h1_zeta));
  return (I * grid_inner(g, dxi, dzeta)).real();
}

/// Curvature K_{xi zeta} of the standard family in sector sigma; the
/// closed form is -(9/16) sigma.
inline double analytic_curvature(int sigma, const SGrid& grid = SGrid(64)) {
  const FirstOrderResponse h1 = extract_h1(paper_family(), sigma, grid);
  return berry_curvature_first_order(grid, h1.xi.matrix, h1.zeta.matrix);
}

/// Geometric phase per revolution around the circle of radius eps:
/// 2 pi eps^2 K (K counts both index orders, hence no factor 1/2).
inline double per_revolution_phase(double eps, double curvature) {
  return 2.0 * pi * eps * eps * curvature;
}

}  // namespace qwire

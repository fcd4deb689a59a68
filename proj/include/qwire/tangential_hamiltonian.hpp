#pragma once

// Effective Hamiltonian for the tangential wavefunction of a particle bound
// to a curve, in the sigma sector of the normal-plane doublet:
//
//   H = 1/2 (P - sigma tau)^2 - kappa^2 / 8,   P = -i d/ds,
//
// discretized with Fourier differentiation matrices. Units hbar = m = 1.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qwire/curve_geometry.hpp"
#include "qwire/eigensolver.hpp"
#include "qwire/errors.hpp"
#include "qwire/linalg.hpp"
#include "qwire/spectral.hpp"

namespace qwire {

struct TangentialHamiltonian {
  Matrix matrix;
  int sigma = 1;
  SGrid grid{16};
};

/// Eigenvalue and eigenvector; the vector has unit norm under grid_inner
/// and its largest component is real positive.
struct EigenPair {
  double value = 0.0;
  CVector vector;
};

inline void check_sigma(int sigma) {
  if (sigma != 1 && sigma != -1)
    throw Error(ErrorKind::config, "sigma must be +1 or -1, got " + std::to_string(sigma));
}

namespace detail {

struct DerivativeMatrices {
  Matrix d1, d2;
};

// Built once per grid size and thread; assembly happens every time step.
inline const DerivativeMatrices& derivative_matrices(const SGrid& grid) {
  thread_local std::map<std::size_t, DerivativeMatrices> cache;
  auto it = cache.find(grid.size());
  if (it == cache.end())
    it = cache.emplace(grid.size(),
                       DerivativeMatrices{first_derivative_matrix(grid), second_derivative_matrix(grid)})
             .first;
  return it->second;
}

}  // namespace detail

/// Assembles the Hamiltonian from sampled kappa and tau.
///
/// The kinetic part uses the second-derivative matrix, which keeps the
/// Nyquist mode at (N/2)^2; the torsion coupling -sigma/2 (P tau + tau P)
/// uses the antisymmetric first-derivative matrix. The result is Hermitian
/// entry by entry and H(-sigma) is the complex conjugate of H(sigma).
inline TangentialHamiltonian build_hamiltonian(const GeometryProfile& profile, int sigma,
                                               const SGrid& grid) {
  check_sigma(sigma);
  if (!(profile.grid == grid) || profile.kappa.size() != grid.size() ||
      profile.tau.size() != grid.size())
    throw Error(ErrorKind::grid_mismatch, "geometry profile was sampled on a different grid");

  const std::size_t n = grid.size();
  const auto& [d1, d2] = detail::derivative_matrices(grid);
  Matrix h = d2;
  h *= -0.5;
  const Complex coupling = 0.5 * I * static_cast<double>(sigma);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) h(i, j) += coupling * d1(i, j).real() * (profile.tau[i] + profile.tau[j]);
    h(i, i) += 0.5 * profile.tau[i] * profile.tau[i] - profile.kappa[i] * profile.kappa[i] / 8.0;
  }
  return {std::move(h), sigma, grid};
}

inline TangentialHamiltonian build_hamiltonian(
    const DeformableCurve& curve, ParamPoint p, int sigma, const SGrid& grid,
    TorsionConvention convention = TorsionConvention::standard) {
  return build_hamiltonian(frenet_profile(curve, p, grid, convention), sigma, grid);
}

/// Lowest `count` eigenpairs in ascending order.
inline std::vector<EigenPair> eigensolve(const TangentialHamiltonian& h, std::size_t count) {
  const std::size_t n = h.grid.size();
  if (count < 1 || count > n)
    throw Error(ErrorKind::config, "eigenpair count must lie in [1, N], got " + std::to_string(count));
  const HermitianEigen eig = hermitian_eigen(h.matrix);
  const double scale = 1.0 / std::sqrt(h.grid.spacing());
  std::vector<EigenPair> out(count);
  for (std::size_t c = 0; c < count; ++c) {
    out[c].value = eig.values[c];
    out[c].vector = eig.vectors.column(c);
    for (auto& v : out[c].vector) v *= scale;
  }
  return out;
}

struct GroundState {
  EigenPair state;
  double gap = 0.0;  ///< E_1 - E_0
};

inline constexpr double default_min_gap = 0.25;

/// The nondegenerate k = 0 ground state of a weakly deformed circle.
/// Throws GapCollapse when the gap to the next level drops below `min_gap`.
inline GroundState ground_state_k0(const TangentialHamiltonian& h,
                                   double min_gap = default_min_gap) {
  auto pairs = eigensolve(h, 2);
  const double gap = pairs[1].value - pairs[0].value;
  if (gap < min_gap)
    throw Error(ErrorKind::gap_collapse, "spectral gap " + std::to_string(gap) +
                                             " below " + std::to_string(min_gap));
  return {std::move(pairs[0]), gap};
}

}  // namespace qwire

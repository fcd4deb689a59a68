#pragma once

// Normal-plane sector: the first excited doublet of the 2D oscillator with
// definite angular momentum sigma = +-1, its superpositions, and the
// probability density around the curve.

#include <array>
#include <cmath>
#include <vector>

#include "qwire/curve_geometry.hpp"
#include "qwire/linalg.hpp"
#include "qwire/tangential_hamiltonian.hpp"

namespace qwire {

/// chi_sigma(rho, phi) = rho e^{-rho^2/2} e^{i sigma phi} / sqrt(pi)
inline Complex chi_eval(int sigma, double rho, double phi) {
  return rho * std::exp(-0.5 * rho * rho) * std::polar(1.0, sigma * phi) / std::sqrt(pi);
}

/// Oscillator energy (n + 1) / eta^2 of level n, in units of the
/// tangential energies.
inline double normal_energy(int n, double eta) { return (n + 1) / (eta * eta); }

/// Full energy of a factorized state: oscillator offset plus tangential part.
inline double total_energy(int n, double eta, double tangential) {
  return normal_energy(n, eta) + tangential;
}

/// |c_plus chi_+ + c_minus chi_-|^2 at (rho, phi).
inline double doublet_density(Complex c_plus, Complex c_minus, double rho, double phi) {
  return std::norm(c_plus * chi_eval(1, rho, phi) + c_minus * chi_eval(-1, rho, phi));
}

/// Density of (e^{i gamma} chi_+ + e^{-i gamma} chi_-)/sqrt 2, which is
/// (2/pi) rho^2 e^{-rho^2} cos^2(phi + gamma).
inline double doublet_density(double gamma, double rho, double phi) {
  const double c = std::cos(phi + gamma);
  return 2.0 / pi * rho * rho * std::exp(-rho * rho) * c * c;
}

/// Gram matrix <chi_a|chi_b> (index 0 is sigma = +1) by quadrature on a
/// polar grid: trapezoid in phi, composite Simpson in rho on [0, rho_max].
inline Matrix normal_overlap_matrix(std::size_t n_rho = 2000, std::size_t n_phi = 16,
                                    double rho_max = 10.0) {
  const std::array<int, 2> sig{1, -1};
  Matrix g(2, 2);
  if (n_rho % 2 != 0) ++n_rho;
  const double dr = rho_max / static_cast<double>(n_rho);
  const double dphi = 2.0 * pi / static_cast<double>(n_phi);
  for (std::size_t ir = 0; ir <= n_rho; ++ir) {
    const double rho = dr * static_cast<double>(ir);
    const double w_r = (ir == 0 || ir == n_rho) ? 1.0 : (ir % 2 == 1 ? 4.0 : 2.0);
    for (std::size_t ip = 0; ip < n_phi; ++ip) {
      const double phi = dphi * static_cast<double>(ip);
      const double w = w_r * dr / 3.0 * dphi * rho;
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          g(a, b) += w * std::conj(chi_eval(sig[a], rho, phi)) * chi_eval(sig[b], rho, phi);
    }
  }
  return g;
}

struct TubeOptions {
  double eta = 0.1;              ///< tube width used to place samples in space
  std::size_t n_s = 64;          ///< samples along the curve (even, >= 16)
  std::size_t n_transverse = 21; ///< samples per normal-plane axis
  double extent = 3.0;           ///< half-width of the normal-plane window in oscillator units
};

struct TubeSample {
  double s = 0.0, alpha = 0.0, beta = 0.0;
  Vec3 position;
  double density = 0.0;
};

struct TubeField {
  TubeOptions options;
  std::vector<TubeSample> samples;  ///< s-major, then alpha, then beta
};

/// Samples |Psi|^2 for the doublet state
///   (e^{i gamma} chi_+ psi_+(s) + e^{-i gamma} chi_- psi_-(s)) / sqrt 2
/// on the adapted grid (s, alpha, beta), placing each sample at
/// r = R(s) + eta alpha N(s) + eta beta B(s).
inline TubeField tube_density_grid(const DeformableCurve& curve, ParamPoint p, double gamma,
                                   const TubeOptions& opts = {}) {
  const SGrid grid(opts.n_s);
  const GeometryProfile profile = frenet_profile(curve, p, grid);
  const CVector psi_plus = ground_state_k0(build_hamiltonian(profile, 1, grid)).state.vector;
  const CVector psi_minus = ground_state_k0(build_hamiltonian(profile, -1, grid)).state.vector;

  TubeField field{opts, {}};
  const std::size_t nt = std::max<std::size_t>(opts.n_transverse, 2);
  field.samples.reserve(grid.size() * nt * nt);
  const double step = 2.0 * opts.extent / static_cast<double>(nt - 1);
  const Complex e_plus = std::polar(1.0 / std::sqrt(2.0), gamma);
  const Complex e_minus = std::polar(1.0 / std::sqrt(2.0), -gamma);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid.s(i);
    const FrenetFrame fr = frenet_frame(curve, p, s);
    const Vec3 r0 = curve.position(p, s);
    for (std::size_t a = 0; a < nt; ++a)
      for (std::size_t b = 0; b < nt; ++b) {
        TubeSample t;
        t.s = s;
        t.alpha = -opts.extent + step * static_cast<double>(a);
        t.beta = -opts.extent + step * static_cast<double>(b);
        const double rho = std::hypot(t.alpha, t.beta);
        const double phi = std::atan2(t.beta, t.alpha);
        t.position = r0 + opts.eta * t.alpha * fr.normal + opts.eta * t.beta * fr.binormal;
        t.density = std::norm(e_plus * chi_eval(1, rho, phi) * psi_plus[i] +
                              e_minus * chi_eval(-1, rho, phi) * psi_minus[i]);
        field.samples.push_back(t);
      }
  }
  return field;
}

}  // namespace qwire

#pragma once

// Periodic uniform grids on [0, 2pi) and Fourier spectral differentiation.

#include <cmath>
#include <string>
#include <vector>

#include "qwire/errors.hpp"
#include "qwire/linalg.hpp"

namespace qwire {

/// Uniform periodic grid s_i = 2 pi i / N. N must be even and at least 16.
class SGrid {
 public:
  explicit SGrid(std::size_t n) : n_(n) {
    if (n < 16 || n % 2 != 0)
      throw Error(ErrorKind::config, "grid size N must be even and >= 16, got " + std::to_string(n));
  }

  std::size_t size() const { return n_; }
  double spacing() const { return 2.0 * pi / static_cast<double>(n_); }
  double s(std::size_t i) const { return spacing() * static_cast<double>(i); }
  RVector points() const {
    RVector r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i] = s(i);
    return r;
  }

  /// Wavenumber of DFT bin j, in (-N/2, N/2]; the Nyquist bin maps to +N/2.
  int wavenumber(std::size_t j) const {
    const int jj = static_cast<int>(j), nn = static_cast<int>(n_);
    return jj <= nn / 2 ? jj : jj - nn;
  }
  std::size_t bin(int k) const {
    const int nn = static_cast<int>(n_);
    return static_cast<std::size_t>(((k % nn) + nn) % nn);
  }

  friend bool operator==(const SGrid&, const SGrid&) = default;

 private:
  std::size_t n_;
};

/// Grid inner product h * sum conj(a_i) b_i, the quadrature of the
/// continuum L2 product on [0, 2pi).
inline Complex grid_inner(const SGrid& g, std::span<const Complex> a, std::span<const Complex> b) {
  return g.spacing() * inner(a, b);
}
inline double grid_norm(const SGrid& g, std::span<const Complex> a) {
  return std::sqrt(g.spacing()) * norm2(a);
}

/// Antisymmetric first-derivative matrix (Nyquist mode annihilated).
inline Matrix first_derivative_matrix(const SGrid& g) {
  const std::size_t n = g.size();
  const double h = g.spacing();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double off = static_cast<double>(static_cast<long>(i) - static_cast<long>(j));
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(0.5 * off * h);
    }
  return d;
}

/// Symmetric second-derivative matrix; the Nyquist mode gets -(N/2)^2.
inline Matrix second_derivative_matrix(const SGrid& g) {
  const std::size_t n = g.size();
  const double h = g.spacing();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        d(i, j) = -pi * pi / (3.0 * h * h) - 1.0 / 6.0;
        continue;
      }
      const double off = static_cast<double>(static_cast<long>(i) - static_cast<long>(j));
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      const double sn = std::sin(0.5 * off * h);
      d(i, j) = -0.5 * sign / (sn * sn);
    }
  return d;
}

/// Spectral derivative of real periodic samples.
inline RVector spectral_derivative(const SGrid& g, std::span<const double> f) {
  const std::size_t n = g.size();
  if (f.size() != n) throw Error(ErrorKind::grid_mismatch, "sample count differs from grid size");
  // the kernel depends only on (i - j) mod N since N is even
  RVector w(n, 0.0);
  for (std::size_t m = 1; m < n; ++m)
    w[m] = 0.5 * (m % 2 == 0 ? 1.0 : -1.0) / std::tan(0.5 * static_cast<double>(m) * g.spacing());
  RVector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) acc += w[(i + n - j) % n] * f[j];
    out[i] = acc;
  }
  return out;
}

/// DFT coefficients c_k = (1/N) sum_j f_j e^{-i k s_j}, indexed by bin.
inline CVector fourier_coefficients(const SGrid& g, std::span<const Complex> f) {
  const std::size_t n = g.size();
  if (f.size() != n) throw Error(ErrorKind::grid_mismatch, "sample count differs from grid size");
  CVector c(n);
  for (std::size_t b = 0; b < n; ++b) {
    const double k = g.wavenumber(b);
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) acc += f[j] * std::polar(1.0, -k * g.s(j));
    c[b] = acc / static_cast<double>(n);
  }
  return c;
}

/// Inverse of `fourier_coefficients`.
inline CVector from_fourier(const SGrid& g, std::span<const Complex> c) {
  const std::size_t n = g.size();
  CVector f(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc{};
    for (std::size_t b = 0; b < n; ++b) acc += c[b] * std::polar(1.0, g.wavenumber(b) * g.s(j));
    f[j] = acc;
  }
  return f;
}

/// e^{iks}/sqrt(2 pi) sampled on the grid; unit norm under grid_inner.
inline CVector plane_wave(const SGrid& g, int k) {
  CVector v(g.size());
  const double amp = 1.0 / std::sqrt(2.0 * pi);
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = amp * std::polar(1.0, k * g.s(j));
  return v;
}

/// <k_row| A |k_col> in the plane-wave basis, with grid quadrature.
inline Complex plane_wave_element(const SGrid& g, const Matrix& a, int k_row, int k_col) {
  const CVector col = a * plane_wave(g, k_col);
  return grid_inner(g, plane_wave(g, k_row), col);
}

}  // namespace qwire

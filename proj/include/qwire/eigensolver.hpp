#pragma once

// Dense complex Hermitian eigensolver.
//
// Householder reduction to Hermitian tridiagonal form, a diagonal unitary
// scaling that makes the off-diagonal real, then implicit-shift QL on the
// real symmetric tridiagonal matrix with eigenvector accumulation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qwire/errors.hpp"
#include "qwire/linalg.hpp"

namespace qwire {

struct HermitianEigen {
  RVector values;  ///< ascending
  Matrix vectors;  ///< column j pairs with values[j]; columns orthonormal
};

namespace detail {

// Reduces `a` in place to Hermitian tridiagonal form, returning the
// accumulated unitary Q with a_in = Q T Q^dagger.
inline Matrix householder_tridiagonalize(Matrix& a) {
  const std::size_t n = a.rows();
  Matrix q = Matrix::identity(n);
  CVector v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;

    const Complex x0 = a(k + 1, k);
    const double alpha = std::sqrt(tail + std::norm(x0));
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);

    std::fill(v.begin(), v.end(), Complex{});
    v[k + 1] = x0 + phase * alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vv += std::norm(v[i]);
    const double tau = 2.0 / vv;

    // trailing block: B <- H B H with H = 1 - tau v v^dagger
    Complex vp{};
    for (std::size_t i = k + 1; i < n; ++i) {
      Complex acc{};
      for (std::size_t j = k + 1; j < n; ++j) acc += a(i, j) * v[j];
      p[i] = tau * acc;
      vp += std::conj(v[i]) * p[i];
    }
    const double half = 0.5 * tau * vp.real();
    for (std::size_t i = k + 1; i < n; ++i) p[i] -= half * v[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) -= v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);

    a(k + 1, k) = -phase * alpha;
    a(k, k + 1) = std::conj(a(k + 1, k));
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = Complex{};

    // Q <- Q H
    for (std::size_t r = 0; r < n; ++r) {
      Complex acc{};
      for (std::size_t j = k + 1; j < n; ++j) acc += q(r, j) * v[j];
      acc *= tau;
      for (std::size_t j = k + 1; j < n; ++j) q(r, j) -= acc * std::conj(v[j]);
    }
  }
  return q;
}

// Implicit QL with Wilkinson-style shift on a real symmetric tridiagonal
// matrix. `off[i]` couples i and i+1; off.back() must be zero. Rotations are
// accumulated into the columns of z.
inline void tridiagonal_ql(RVector& diag, RVector& off, std::vector<RVector>& z, int max_iter) {
  const int n = static_cast<int>(diag.size());
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == max_iter)
        throw Error(ErrorKind::convergence_failure,
                    "tridiagonal QL did not converge within " + std::to_string(max_iter) +
                        " iterations");
      double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
      double r = std::hypot(g, 1.0);
      g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i;
      for (i = m - 1; i >= l; --i) {
        double f = s * off[i];
        const double b = c * off[i];
        r = std::hypot(f, g);
        off[i + 1] = r;
        if (r == 0.0) {
          diag[i + 1] -= p;
          off[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        for (int k = 0; k < n; ++k) {
          f = z[k][i + 1];
          z[k][i + 1] = s * z[k][i] + c * f;
          z[k][i] = c * z[k][i] - s * f;
        }
      }
      if (r == 0.0 && i >= l) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0.0;
    } while (m != l);
  }
}

}  // namespace detail

/// Rotates the global phase of `v` so its largest-magnitude component is
/// real and positive. Near-ties go to the lowest index.
inline void fix_phase(std::span<Complex> v) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs * (1.0 + 1e-10) + 1e-300) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs <= 0.0) return;
  const Complex rot = std::conj(v[best]) / best_abs;
  for (auto& c : v) c *= rot;
}

/// Full eigendecomposition of a Hermitian matrix. Eigenvalues ascend;
/// each eigenvector is phase-fixed with `fix_phase`. Throws
/// ConvergenceFailure if QL exceeds `max_iter` sweeps for one eigenvalue.
inline HermitianEigen hermitian_eigen(const Matrix& h, int max_iter = 60) {
  const std::size_t n = h.rows();
  if (h.cols() != n) throw Error(ErrorKind::grid_mismatch, "eigensolve needs a square matrix");
  HermitianEigen out;
  if (n == 0) return out;

  Matrix a = h;
  Matrix q = detail::householder_tridiagonalize(a);

  RVector diag(n), off(n, 0.0);
  CVector phase(n, Complex{1.0});
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Complex e = a(i + 1, i);
    const double ae = std::abs(e);
    off[i] = ae;
    phase[i + 1] = ae == 0.0 ? phase[i] : phase[i] * e / ae;
  }

  std::vector<RVector> z(n, RVector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) z[i][i] = 1.0;
  detail::tridiagonal_ql(diag, off, z, max_iter);

  // vectors = Q diag(phase) Z
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) q(r, c) *= phase[c];
  Matrix vecs(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex qrk = q(r, k);
      for (std::size_t c = 0; c < n; ++c) vecs(r, c) += qrk * z[k][c];
    }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = diag[order[c]];
    CVector col = vecs.column(order[c]);
    fix_phase(col);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = col[r];
  }
  return out;
}

/// Closest unitary to `w` in the polar sense, W (W^dagger W)^{-1/2}.
/// Throws NonUnitarizable when W^dagger W has an eigenvalue below
/// `min_singular^2`.
inline Matrix unitary_polar(const Matrix& w, double min_singular = 1e-4) {
  const HermitianEigen g = hermitian_eigen(w.adjoint() * w);
  const std::size_t n = w.cols();
  if (n > 0 && g.values.front() < min_singular * min_singular)
    throw Error(ErrorKind::non_unitarizable,
                "smallest singular value " + std::to_string(std::sqrt(std::max(0.0, g.values.front()))));
  Matrix inv_sqrt(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k)
        acc += g.vectors(i, k) * std::conj(g.vectors(j, k)) / std::sqrt(g.values[k]);
      inv_sqrt(i, j) = acc;
    }
  return w * inv_sqrt;
}

}  // namespace qwire

#pragma once

// Small dense linear algebra: complex matrices and vectors, 3-vectors,
// and a partial-pivot LU solve. Sizes here never exceed a few hundred.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qwire/errors.hpp"

namespace qwire {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex I{0.0, 1.0};

// ---------------------------------------------------------------- Vec3

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return s * a; }
  Vec3& operator+=(Vec3 o) { x += o.x; y += o.y; z += o.z; return *this; }
  double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------- Matrix

/// Row-major dense complex matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Matrix adjoint() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }
  Matrix conjugate() const {
    Matrix r = *this;
    for (auto& v : r.data_) v = std::conj(v);
    return r;
  }

  CVector column(std::size_t j) const {
    CVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix& operator+=(const Matrix& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols_ == b.rows_);
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend CVector operator*(const Matrix& a, std::span<const Complex> v) {
    assert(a.cols_ == v.size());
    CVector r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Complex acc{};
      for (std::size_t j = 0; j < a.cols_; ++j) acc += a(i, j) * v[j];
      r[i] = acc;
    }
    return r;
  }
  friend CVector operator*(const Matrix& a, const CVector& v) {
    return a * std::span<const Complex>(v);
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> data_;
};

inline double max_abs(const Matrix& m) {
  double r = 0.0;
  for (const auto& v : m.data()) r = std::max(r, std::abs(v));
  return r;
}

/// max |A - A^dagger|
inline double hermiticity_error(const Matrix& a) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      r = std::max(r, std::abs(a(i, j) - std::conj(a(j, i))));
  return r;
}

// ---------------------------------------------------------------- vectors

/// <a|b> with the conjugate on the left argument.
inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double norm2(std::span<const Complex> a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

inline CVector scaled(std::span<const Complex> a, Complex s) {
  CVector r(a.begin(), a.end());
  for (auto& v : r) v *= s;
  return r;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

/// LU factorization with partial pivoting, PA = LU, stored in place.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    assert(lu_.cols() == n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > best) {
          best = std::abs(lu_(i, k));
          piv = i;
        }
      if (best == 0.0) throw Error(ErrorKind::convergence_failure, "singular matrix in LU factorization");
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
      }
      const Complex inv = 1.0 / lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const Complex f = lu_(i, k) * inv;
        lu_(i, k) = f;
        if (f == Complex{}) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  CVector solve(std::span<const Complex> b) const {
    const std::size_t n = lu_.rows();
    assert(b.size() == n);
    CVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
      x[i] = acc;
    }
    for (std::size_t k = n; k-- > 0;) {
      Complex acc = x[k];
      for (std::size_t j = k + 1; j < n; ++j) acc -= lu_(k, j) * x[j];
      x[k] = acc / lu_(k, k);
    }
    return x;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline CVector lu_solve(Matrix a, const CVector& b) { return LuFactorization(std::move(a)).solve(b); }

}  // namespace qwire

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "qwire/eigensolver.hpp"

using namespace qwire;

namespace {

double orthonormality_error(const Matrix& v) {
  const Matrix g = v.adjoint() * v;
  return max_abs(g - Matrix::identity(g.rows()));
}

double residual(const Matrix& a, const HermitianEigen& e) {
  double worst = 0.0;
  for (std::size_t c = 0; c < e.values.size(); ++c) {
    const CVector v = e.vectors.column(c);
    const CVector av = a * v;
    for (std::size_t i = 0; i < v.size(); ++i)
      worst = std::max(worst, std::abs(av[i] - e.values[c] * v[i]));
  }
  return worst;
}

}  // namespace

TEST(Eigensolver, MatchesCharacteristicPolynomialOnRandom4x4) {
  std::mt19937_64 rng(20240917);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = oracle::random_hermitian(4, rng);
    const auto roots = oracle::polynomial_roots(oracle::characteristic_polynomial(a));
    std::vector<double> expected;
    for (const auto& z : roots) {
      EXPECT_LT(std::abs(z.imag()), 1e-8);
      expected.push_back(z.real());
    }
    std::sort(expected.begin(), expected.end());
    const auto e = hermitian_eigen(a);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(e.values[i], expected[i], 1e-10) << trial;
  }
}

TEST(Eigensolver, ResidualAndOrthonormalityOnLargerMatrices) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 3u, 17u, 64u, 128u}) {
    const Matrix a = oracle::random_hermitian(n, rng, 3.0);
    const auto e = hermitian_eigen(a);
    EXPECT_TRUE(std::is_sorted(e.values.begin(), e.values.end()));
    EXPECT_LT(residual(a, e), 1e-10 * n);
    EXPECT_LT(orthonormality_error(e.vectors), 1e-10);
  }
}

TEST(Eigensolver, DiagonalAndAlreadyTridiagonalInputs) {
  const std::vector<double> d{3.0, -1.0, 2.0, 0.5};
  const auto e = hermitian_eigen(Matrix::diagonal(d));
  EXPECT_EQ(e.values, (RVector{-1.0, 0.5, 2.0, 3.0}));

  Matrix t(3, 3);
  t(0, 0) = 2.0;
  t(1, 1) = 2.0;
  t(2, 2) = 2.0;
  t(0, 1) = Complex(0.0, 1.0);
  t(1, 0) = Complex(0.0, -1.0);
  t(1, 2) = 1.0;
  t(2, 1) = 1.0;
  const auto f = hermitian_eigen(t);
  EXPECT_NEAR(f.values[0], 2.0 - std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(f.values[1], 2.0, 1e-14);
  EXPECT_NEAR(f.values[2], 2.0 + std::sqrt(2.0), 1e-14);
}

TEST(Eigensolver, PhaseFixMakesLargestComponentRealPositive) {
  std::mt19937_64 rng(11);
  const Matrix a = oracle::random_hermitian(12, rng);
  const auto e = hermitian_eigen(a);
  for (std::size_t c = 0; c < 12; ++c) {
    const CVector v = e.vectors.column(c);
    const auto it = std::max_element(v.begin(), v.end(),
                                     [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
    EXPECT_GT(it->real(), 0.0);
    EXPECT_NEAR(it->imag(), 0.0, 1e-15);
  }
}

TEST(Eigensolver, DeterministicForIdenticalInput) {
  std::mt19937_64 rng(3);
  const Matrix a = oracle::random_hermitian(32, rng);
  const auto e1 = hermitian_eigen(a);
  const auto e2 = hermitian_eigen(a);
  EXPECT_EQ(e1.values, e2.values);
  for (std::size_t k = 0; k < e1.vectors.data().size(); ++k)
    EXPECT_EQ(e1.vectors.data()[k], e2.vectors.data()[k]);
}

TEST(Eigensolver, IterationCapRaisesConvergenceFailure) {
  std::mt19937_64 rng(5);
  const Matrix a = oracle::random_hermitian(16, rng);
  EXPECT_THROW(
      {
        try {
          hermitian_eigen(a, 0);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::convergence_failure);
          throw;
        }
      },
      Error);
}

TEST(PolarUnitarization, ProducesUnitaryAndRejectsSingular) {
  Matrix w(2, 2);
  w(0, 0) = Complex(0.9, 0.1);
  w(0, 1) = 0.05;
  w(1, 0) = Complex(0.0, -0.02);
  w(1, 1) = Complex(0.8, -0.3);
  const Matrix u = unitary_polar(w);
  EXPECT_LT(max_abs(u.adjoint() * u - Matrix::identity(2)), 1e-13);

  // a unitary input is returned unchanged
  Matrix r(2, 2);
  r(0, 0) = std::polar(1.0, 0.3);
  r(1, 1) = std::polar(1.0, -0.7);
  EXPECT_LT(max_abs(unitary_polar(r) - r), 1e-14);

  Matrix singular(2, 2);
  singular(0, 0) = 1.0;
  EXPECT_THROW(unitary_polar(singular), Error);
}

TEST(LuSolve, SolvesComplexSystem) {
  std::mt19937_64 rng(13);
  Matrix a = oracle::random_hermitian(10, rng);
  for (std::size_t i = 0; i < 10; ++i) a(i, i) += Complex(0.0, 2.0);  // non-Hermitian, well posed
  CVector x(10);
  for (std::size_t i = 0; i < 10; ++i) x[i] = Complex(std::sin(i), std::cos(3.0 * i));
  const CVector b = a * x;
  EXPECT_LT(max_abs_diff(lu_solve(a, b), x), 1e-12);
}

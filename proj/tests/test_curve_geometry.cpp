#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qwire/curve_geometry.hpp"

using namespace qwire;

namespace {

void expect_vec_near(Vec3 a, Vec3 b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

std::array<std::array<double, 3>, 3> random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4] = {n(rng), n(rng), n(rng), n(rng)};
  const double len = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (double& v : q) v /= len;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

}  // namespace

TEST(EvaluateCurve, StandardFamilyPoints) {
  const auto c = paper_family();
  expect_vec_near(c.position({0.0, 0.0}, 0.0), {1.0, 0.0, 0.0}, 1e-15);
  expect_vec_near(c.position({0.2, 0.0}, 0.0), {0.8, 0.0, 0.0}, 1e-15);
  expect_vec_near(c.position({0.0, 0.2}, pi / 2), {0.0, 1.0, -0.2}, 1e-15);
}

TEST(EvaluateCurve, MatchesDefinitionAndIsPeriodic) {
  const auto c = paper_family();
  for (double s = -3.0; s < 9.0; s += 0.37)
    for (ParamPoint p : {ParamPoint{0.1, -0.2}, ParamPoint{-0.3, 0.05}}) {
      expect_vec_near(c.position(p, s), oracle::paper_family_position(p.xi, p.zeta, s), 1e-14);
      expect_vec_near(c.position(p, s), c.position(p, s + 2 * pi), 1e-13);
    }
}

TEST(FrenetProfile, UnitCircle) {
  const auto prof = frenet_profile(paper_family(), {}, SGrid(64));
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_NEAR(prof.kappa[i], 1.0, 1e-14);
    EXPECT_NEAR(prof.tau[i], 0.0, 1e-14);
    EXPECT_NEAR(prof.tau_prime[i], 0.0, 1e-12);
    EXPECT_NEAR(prof.speed[i], 1.0, 1e-15);
  }
}

TEST(FrenetProfile, FirstOrderCurvatureAndTorsion) {
  const SGrid g(64);
  const auto kx = frenet_profile(paper_family(), {0.01, 0.0}, g);
  const auto tz = frenet_profile(paper_family(), {0.0, 0.01}, g);
  for (std::size_t i = 0; i < 64; ++i) {
    const double s = g.s(i);
    EXPECT_NEAR(kx.kappa[i], 1.0 - 0.03 * std::cos(2 * s), 2e-4);
    EXPECT_NEAR(tz.tau[i], 0.06 * std::sin(2 * s), 1e-4);
    EXPECT_NEAR(tz.tau_prime[i], 0.12 * std::cos(2 * s), 2e-4);
  }
}

TEST(FrenetProfile, AgreesWithFiniteDifferenceOracle) {
  const SGrid g(32);
  for (ParamPoint p : {ParamPoint{0.01, 0.0}, ParamPoint{0.0, 0.01}, ParamPoint{0.07, -0.04},
                       ParamPoint{-0.1, 0.1}}) {
    const auto prof = frenet_profile(paper_family(), p, g);
    const oracle::CurveFn r = [&](double s) {
      return oracle::paper_family_position(p.xi, p.zeta, s);
    };
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto fd = oracle::fd_frenet(r, g.s(i));
      EXPECT_NEAR(prof.kappa[i], fd.kappa, 1e-6 * std::abs(fd.kappa));
      EXPECT_NEAR(prof.tau[i], fd.tau, 1e-6 * std::max(std::abs(fd.tau), 1e-2));
      EXPECT_NEAR(prof.speed[i], fd.speed, 1e-9);
    }
  }
}

TEST(FrenetProfile, TorsionSignConventionAndFlippedControl) {
  const SGrid g(32);
  const auto std_prof = frenet_profile(paper_family(), {0.0, 1e-4}, g);
  const auto flipped = frenet_profile(paper_family(), {0.0, 1e-4}, g, TorsionConvention::flipped);
  // s = pi/4: tau ~ +6 zeta
  EXPECT_NEAR(std_prof.tau[4], 6e-4, 1e-8);
  EXPECT_NEAR(flipped.tau[4], -6e-4, 1e-8);
}

TEST(FrenetProfile, RigidMotionInvariance) {
  std::mt19937_64 rng(42);
  const SGrid g(32);
  const auto base = paper_family();
  const ParamPoint p{0.05, 0.03};
  const auto ref = frenet_profile(base, p, g);
  for (int trial = 0; trial < 5; ++trial) {
    const auto moved = base.transformed(random_rotation(rng), {0.3, -1.2, 2.5});
    const auto prof = frenet_profile(moved, p, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(prof.kappa[i], ref.kappa[i], 1e-12);
      EXPECT_NEAR(prof.tau[i], ref.tau[i], 1e-12);
    }
  }
}

TEST(FrenetProfile, PlanarCurvesHaveZeroTorsion) {
  // ellipse-like planar curve with several harmonics in a tilted plane
  CoordinatePolys base{TrigPoly{{1, 1.0, 0.0}, {3, 0.05, 0.02}},
                       TrigPoly{{1, 0.0, 0.7}, {2, 0.03, 0.0}}, TrigPoly{}};
  const DeformableCurve planar(base, {}, {});
  std::mt19937_64 rng(9);
  const auto tilted = planar.transformed(random_rotation(rng), {1.0, 2.0, 3.0});
  for (const auto* c : {&planar, &tilted}) {
    const auto prof = frenet_profile(*c, {}, SGrid(64));
    for (double t : prof.tau) EXPECT_NEAR(t, 0.0, 1e-12);
  }
  const auto xi_only = frenet_profile(paper_family(), {0.2, 0.0}, SGrid(64));
  for (double t : xi_only.tau) EXPECT_NEAR(t, 0.0, 1e-12);
}

TEST(FrenetProfile, DegenerateFrameIsReported) {
  // a "curve" that is a straight segment traversed back and forth
  CoordinatePolys line{TrigPoly{{1, 1.0, 0.0}}, TrigPoly{}, TrigPoly{}};
  const DeformableCurve c(line, {}, {});
  try {
    frenet_profile(c, {}, SGrid(16));
    FAIL() << "expected DegenerateFrame";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_frame);
  }
}

TEST(ArclengthDefect, SecondOrderInParameters) {
  const auto c = paper_family();
  EXPECT_LT(arclength_defect(c, {0.0, 0.0}), 1e-14);
  const double dx = arclength_defect(c, {0.01, 0.0});
  const double dz = arclength_defect(c, {0.0, 0.01});
  EXPECT_LE(dx, 3e-4);
  EXPECT_LE(dz, 3e-4);
  // quadratic scaling
  EXPECT_NEAR(arclength_defect(c, {0.02, 0.0}) / dx, 4.0, 0.1);
  EXPECT_NEAR(arclength_defect(c, {0.0, 0.02}) / dz, 4.0, 0.1);
}

TEST(DeformationField, AdaptedFrameComponents) {
  const SGrid g(64);
  const auto v = deformation_field(paper_family(), Direction::xi, g);
  const auto u = deformation_field(paper_family(), Direction::zeta, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.s(i);
    EXPECT_NEAR(v.tangential[i], 0.5 * std::sin(2 * s), 1e-10);
    EXPECT_NEAR(v.normal[i], std::cos(2 * s), 1e-10);
    EXPECT_NEAR(v.binormal[i], 0.0, 1e-10);
    EXPECT_NEAR(u.tangential[i], 0.0, 1e-10);
    EXPECT_NEAR(u.normal[i], 0.0, 1e-10);
    EXPECT_NEAR(u.binormal[i], std::cos(2 * s), 1e-10);
    // decomposition reproduces the Cartesian velocity
    const auto fr = frenet_frame(paper_family(), {}, s);
    const Vec3 back = v.tangential[i] * fr.tangent + v.normal[i] * fr.normal +
                      v.binormal[i] * fr.binormal;
    expect_vec_near(back, v.velocity[i], 1e-14);
  }
}

TEST(LocallyArclengthPreserving, StandardFieldsAndDilation) {
  const SGrid g(64);
  const auto base = frenet_profile(paper_family(), {}, g);
  EXPECT_LT(check_locally_arclength_preserving(deformation_field(paper_family(), Direction::xi, g), base),
            1e-10);
  EXPECT_LT(
      check_locally_arclength_preserving(deformation_field(paper_family(), Direction::zeta, g), base),
      1e-10);
  const auto dilation = deformation_field_from_components(g, RVector(64, 0.0), RVector(64, -1.0),
                                                          RVector(64, 0.0));
  EXPECT_NEAR(check_locally_arclength_preserving(dilation, base), 1.0, 1e-14);
  EXPECT_THROW(check_locally_arclength_preserving(deformation_field(paper_family(), Direction::xi,
                                                                    SGrid(32)),
                                                  base),
               Error);
}

TEST(SpectralDerivative, ExactForBandLimited) {
  const SGrid g(32);
  RVector f(32), expected(32);
  for (std::size_t i = 0; i < 32; ++i) {
    const double s = g.s(i);
    f[i] = std::sin(s) + 0.3 * std::cos(5 * s);
    expected[i] = std::cos(s) - 1.5 * std::sin(5 * s);
  }
  const auto d = spectral_derivative(g, f);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(d[i], expected[i], 1e-12);
}

TEST(SGridValidation, RejectsOddOrSmall) {
  EXPECT_THROW(SGrid(7), Error);
  EXPECT_THROW(SGrid(15), Error);
  EXPECT_THROW(SGrid(14), Error);
  EXPECT_NO_THROW(SGrid(16));
}

#include <gtest/gtest.h>

#include <random>

#include "qwire/holonomy.hpp"
#include "qwire/perturbation.hpp"

using namespace qwire;

namespace {

const double expected_dphi(double eps) { return -9.0 / 8.0 * pi * eps * eps; }

}  // namespace

TEST(ParameterLoop, DrivingCircleGeometry) {
  const auto loop = ParameterLoop::driving_circle(0.05, 64);
  EXPECT_NEAR(loop.points()[0].xi, 0.0, 1e-17);
  EXPECT_NEAR(loop.points()[0].zeta, 0.0, 1e-17);
  // counterclockwise: moves to negative zeta first, i.e. zeta = -eps sin theta
  EXPECT_LT(loop.points()[1].zeta, 0.0);
  EXPECT_GT(loop.signed_area(), 0.0);
  EXPECT_NEAR(loop.signed_area(), 32 * 0.05 * 0.05 * std::sin(2 * pi / 64), 1e-16);
  const auto cw = ParameterLoop::driving_circle(0.05, 64, Orientation::clockwise);
  for (std::size_t j = 0; j < 64; ++j) {
    const double th = 2 * pi * j / 64.0;
    EXPECT_NEAR(cw.points()[j].xi, 0.05 * (1 - std::cos(th)), 1e-15);
    EXPECT_NEAR(cw.points()[j].zeta, 0.05 * std::sin(th), 1e-15);
  }
  EXPECT_THROW(ParameterLoop::circle({}, 0.1, 7), Error);
}

TEST(WilsonLoop, TrivialLoopHasZeroPhase) {
  const ParameterLoop trivial(std::vector<ParamPoint>(8, ParamPoint{0.02, 0.01}));
  const auto r = berry_phase_wilson_loop(paper_family(), 1, trivial, SGrid(32));
  EXPECT_EQ(r.phase, 0.0);
  EXPECT_NEAR(r.diagnostics.min_overlap, 1.0, 1e-14);
}

TEST(WilsonLoop, PerRevolutionPhaseAndOppositeSectors) {
  const SGrid g(64);
  const auto loop = ParameterLoop::driving_circle(0.05, 64);
  const auto plus = berry_phase_wilson_loop(paper_family(), 1, loop, g);
  const auto minus = berry_phase_wilson_loop(paper_family(), -1, loop, g);
  EXPECT_NEAR(plus.phase, expected_dphi(0.05), 0.01 * std::abs(expected_dphi(0.05)));
  EXPECT_NEAR(minus.phase, -expected_dphi(0.05), 0.01 * std::abs(expected_dphi(0.05)));
  EXPECT_NEAR(plus.phase, -minus.phase, 1e-12);
  EXPECT_GT(plus.diagnostics.min_overlap, 0.9);
  EXPECT_GT(plus.diagnostics.min_gap, 0.25);
  EXPECT_GT(plus.diagnostics.max_arclength_defect, 0.0);
}

TEST(WilsonLoop, LiteralClockwiseParametrizationGivesOppositeSign) {
  const SGrid g(32);
  const auto ccw = berry_phase_wilson_loop(paper_family(), 1, ParameterLoop::driving_circle(0.05, 64), g);
  const auto cw = berry_phase_wilson_loop(
      paper_family(), 1, ParameterLoop::driving_circle(0.05, 64, Orientation::clockwise), g);
  EXPECT_NEAR(cw.phase, -ccw.phase, 1e-12);
}

TEST(WilsonLoop, GaugeInvariance) {
  const SGrid g(32);
  const auto loop = ParameterLoop::driving_circle(0.08, 32);
  auto ls = loop_ground_states(paper_family(), 1, loop, g);
  const auto ref = wilson_loop_phase(ls.states);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int trial = 0; trial < 10; ++trial) {
    auto gauged = ls.states;
    for (auto& v : gauged) v = scaled(v, std::polar(1.0, u(rng)));
    EXPECT_NEAR(wilson_loop_phase(gauged).phase, ref.phase, 1e-12);
  }
}

TEST(WilsonLoop, OrientationAndComposition) {
  const SGrid g(32);
  const auto loop = ParameterLoop::driving_circle(0.06, 48);
  const auto fwd = berry_phase_wilson_loop(paper_family(), 1, loop, g);
  const auto rev = berry_phase_wilson_loop(paper_family(), 1, loop.reversed(), g);
  const auto twice = berry_phase_wilson_loop(paper_family(), 1, loop.repeated(2), g);
  EXPECT_NEAR(rev.phase, -fwd.phase, 1e-14);
  EXPECT_NEAR(twice.phase, 2 * fwd.phase, 1e-12);
  EXPECT_NEAR(twice.unwrapped_phase, 2 * fwd.unwrapped_phase, 1e-12);
}

TEST(WilsonLoop, RefinementConvergesQuadratically) {
  const SGrid g(32);
  const double eps = 0.05;
  const double g16 = berry_phase_wilson_loop(paper_family(), 1, ParameterLoop::driving_circle(eps, 16), g).phase;
  const double g32 = berry_phase_wilson_loop(paper_family(), 1, ParameterLoop::driving_circle(eps, 32), g).phase;
  const double g64 = berry_phase_wilson_loop(paper_family(), 1, ParameterLoop::driving_circle(eps, 64), g).phase;
  const double d1 = std::abs(g32 - g16), d2 = std::abs(g64 - g32);
  EXPECT_LE(d2, d1 / 4.0 * 1.2);
}

TEST(WilsonLoop, FluxMatchesTwiceCurvatureTimesArea) {
  const SGrid g(32);
  const double k = analytic_curvature(1, g);
  for (double eps : {0.01, 0.02, 0.04}) {
    const auto loop = ParameterLoop::driving_circle(eps, 64);
    const double phase = berry_phase_wilson_loop(paper_family(), 1, loop, g).phase;
    // discrete polygon area, so the comparison isolates the O(eps^4) physics
    EXPECT_NEAR(phase, 2.0 * k * loop.signed_area(), 40.0 * std::pow(eps, 4)) << eps;
  }
}

TEST(WilsonLoop, UnderResolvedLoopRaisesOverlapTooSmall) {
  HolonomyOptions opts;
  opts.min_overlap = 0.99999;
  try {
    berry_phase_wilson_loop(paper_family(), 1, ParameterLoop::driving_circle(0.1, 8), SGrid(32), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::overlap_too_small);
  }
}

TEST(WilsonLoop, GapThresholdViolationRaisesGapCollapse) {
  HolonomyOptions opts;
  opts.min_gap = 0.49;  // the circle gap is 0.5 and deformation lowers it
  try {
    berry_phase_wilson_loop(paper_family(), 1, ParameterLoop::driving_circle(0.1, 16), SGrid(32), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::gap_collapse) << e.what();
  }
}

TEST(Plaquette, CurvatureAtOrigin) {
  const SGrid g(64);
  for (int sigma : {1, -1}) {
    const auto r = berry_curvature_plaquette(paper_family(), sigma, {0.0, 0.0}, 1e-3, g);
    EXPECT_NEAR(r.curvature, -0.5625 * sigma, 1e-3);
  }
}

TEST(Plaquette, EstimatorIsSecondOrderInSide) {
  const SGrid g(32);
  const ParamPoint c{0.05, 0.02};
  const double k1 = berry_curvature_plaquette(paper_family(), 1, c, 4e-2, g).curvature;
  const double k2 = berry_curvature_plaquette(paper_family(), 1, c, 2e-2, g).curvature;
  const double k3 = berry_curvature_plaquette(paper_family(), 1, c, 1e-2, g).curvature;
  const double ratio = std::abs(k1 - k2) / std::abs(k2 - k3);
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(WilczekZee, DiagonalTransportWithOppositePhases) {
  const SGrid g(64);
  const auto loop = ParameterLoop::driving_circle(0.05, 64);
  const auto wz = wilczek_zee_transport(paper_family(), loop, g);
  const auto& u = wz.unitary;
  EXPECT_LT(max_abs(u.adjoint() * u - Matrix::identity(2)), 1e-8);
  EXPECT_LT(std::abs(u(0, 1)), 1e-8);
  EXPECT_LT(std::abs(u(1, 0)), 1e-8);
  const double abelian = berry_phase_wilson_loop(paper_family(), 1, loop, g).phase;
  EXPECT_NEAR(wz.sector_phases[0], abelian, 1e-8);
  EXPECT_NEAR(wz.sector_phases[1], -abelian, 1e-8);
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  EXPECT_NEAR(std::abs(det), 1.0, 1e-10);
  EXPECT_NEAR(std::arg(det), 0.0, 1e-8);
}

TEST(WilczekZee, TrivialLoopIsIdentity) {
  const ParameterLoop trivial(std::vector<ParamPoint>(8, ParamPoint{}));
  const auto wz = wilczek_zee_transport(paper_family(), trivial, SGrid(32));
  EXPECT_LT(max_abs(wz.unitary - Matrix::identity(2)), 1e-8);
}

TEST(AccumulateRevolutions, DoubletCoefficients) {
  const auto zero = accumulate_revolutions(-0.1414, 0);
  EXPECT_NEAR(std::abs(zero.plus - 1.0 / std::sqrt(2.0)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(zero.minus - 1.0 / std::sqrt(2.0)), 0.0, 1e-16);
  const double dphi = per_revolution_phase(0.2, -9.0 / 16.0);
  const auto one = accumulate_revolutions(dphi, 1);
  EXPECT_NEAR(one.gamma, -0.1414, 1e-4);
  EXPECT_NEAR(std::arg(one.plus), dphi, 1e-15);
  EXPECT_NEAR(std::arg(one.minus), -dphi, 1e-15);
  EXPECT_THROW(accumulate_revolutions(dphi, -1), Error);
}

TEST(AccumulateRevolutions, QuarterTurnMovesLobesToBinormal) {
  const double dphi = per_revolution_phase(0.2, -9.0 / 16.0);
  const long m = std::lround((pi / 2) / std::abs(dphi));
  const auto c = accumulate_revolutions(dphi, m);
  // scan the normal plane and locate the density maximum
  const double cell = 0.05;
  double best = -1, ba = 0, bb = 0;
  for (double a = -3; a <= 3 + 1e-9; a += cell)
    for (double b = -3; b <= 3 + 1e-9; b += cell) {
      const double d = doublet_density(c.gamma, std::hypot(a, b), std::atan2(b, a));
      if (d > best) best = d, ba = a, bb = b;
    }
  EXPECT_NEAR(ba, 0.0, cell);
  EXPECT_NEAR(std::abs(bb), 1.0, cell);
}

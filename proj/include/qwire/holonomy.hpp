#pragma once

// Gauge-invariant Berry phases, curvature, and Wilczek-Zee transport over
// discretized loops in (xi, zeta) space, via products of eigenstate
// overlaps (discrete Wilson loops).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qwire/curve_geometry.hpp"
#include "qwire/eigensolver.hpp"
#include "qwire/errors.hpp"
#include "qwire/linalg.hpp"
#include "qwire/normal_modes.hpp"
#include "qwire/parallel.hpp"
#include "qwire/spectral.hpp"
#include "qwire/tangential_hamiltonian.hpp"

namespace qwire {

enum class Orientation { counterclockwise, clockwise };

/// Closed polygon of parameter points; the last point connects to the first.
class ParameterLoop {
 public:
  ParameterLoop() = default;
  explicit ParameterLoop(std::vector<ParamPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw Error(ErrorKind::config, "a loop needs at least one point");
  }

  /// M points on the circle of given center and radius, starting at angle
  /// `start` and advancing in the requested sense.
  static ParameterLoop circle(ParamPoint center, double radius, std::size_t m, double start = 0.0,
                              Orientation o = Orientation::counterclockwise) {
    if (m < 8) throw Error(ErrorKind::config, "circle loops need M >= 8, got " + std::to_string(m));
    const double sense = o == Orientation::counterclockwise ? 1.0 : -1.0;
    std::vector<ParamPoint> pts(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double th = start + sense * 2.0 * pi * static_cast<double>(j) / static_cast<double>(m);
      pts[j] = {center.xi + radius * std::cos(th), center.zeta + radius * std::sin(th)};
    }
    return ParameterLoop(std::move(pts));
  }

  /// Circle of radius eps through the origin, centered at (eps, 0):
  /// xi = eps (1 - cos theta), zeta = -+ eps sin theta.
  static ParameterLoop driving_circle(double eps, std::size_t m,
                                      Orientation o = Orientation::counterclockwise) {
    return circle({eps, 0.0}, eps, m, pi, o);
  }

  /// Counterclockwise square of side delta.
  static ParameterLoop plaquette(ParamPoint center, double delta) {
    const double h = 0.5 * delta;
    return ParameterLoop({{center.xi - h, center.zeta - h},
                          {center.xi + h, center.zeta - h},
                          {center.xi + h, center.zeta + h},
                          {center.xi - h, center.zeta + h}});
  }

  const std::vector<ParamPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  ParameterLoop reversed() const {
    std::vector<ParamPoint> r(points_.size());
    // keep the base point, walk the rest backwards
    r[0] = points_[0];
    for (std::size_t j = 1; j < points_.size(); ++j) r[j] = points_[points_.size() - j];
    return ParameterLoop(std::move(r));
  }

  ParameterLoop repeated(std::size_t times) const {
    std::vector<ParamPoint> r;
    r.reserve(points_.size() * times);
    for (std::size_t t = 0; t < times; ++t) r.insert(r.end(), points_.begin(), points_.end());
    return ParameterLoop(std::move(r));
  }

  /// Shoelace area, positive for counterclockwise loops.
  double signed_area() const {
    double a = 0.0;
    for (std::size_t j = 0; j < points_.size(); ++j) {
      const auto& p = points_[j];
      const auto& q = points_[(j + 1) % points_.size()];
      a += p.xi * q.zeta - q.xi * p.zeta;
    }
    return 0.5 * a;
  }

 private:
  std::vector<ParamPoint> points_;
};

struct HolonomyOptions {
  std::size_t threads = 0;     ///< 0 means hardware concurrency
  double min_overlap = 0.9;    ///< below this the loop is under-resolved
  double min_gap = default_min_gap;
  TorsionConvention convention = TorsionConvention::standard;
};

struct HolonomyDiagnostics {
  std::size_t points = 0;
  double min_overlap = 1.0;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_arclength_defect = 0.0;
};

enum class HolonomyKind { abelian_phase, curvature, wilczek_zee };

struct HolonomyResult {
  HolonomyKind kind = HolonomyKind::abelian_phase;
  double phase = 0.0;            ///< in (-pi, pi]
  double unwrapped_phase = 0.0;  ///< sum of per-step increments
  double curvature = 0.0;        ///< plaquette estimate of K
  Matrix unitary;                ///< d x d transport, wilczek_zee only
  std::vector<double> sector_phases;
  HolonomyDiagnostics diagnostics;
};

/// Ground states of sector sigma at every loop point, computed in parallel.
struct LoopStates {
  std::vector<CVector> states;
  HolonomyDiagnostics diagnostics;
};

inline LoopStates loop_ground_states(const DeformableCurve& curve, int sigma,
                                     const ParameterLoop& loop, const SGrid& grid,
                                     const HolonomyOptions& opts = {}) {
  const auto& pts = loop.points();
  LoopStates out;
  out.states.resize(pts.size());
  std::vector<double> gaps(pts.size()), defects(pts.size());
  parallel_for(pts.size(), opts.threads, [&](std::size_t j) {
    auto gs = ground_state_k0(build_hamiltonian(curve, pts[j], sigma, grid, opts.convention),
                              opts.min_gap);
    out.states[j] = std::move(gs.state.vector);
    gaps[j] = gs.gap;
    defects[j] = arclength_defect(curve, pts[j]);
  });
  out.diagnostics.points = pts.size();
  out.diagnostics.min_gap = *std::min_element(gaps.begin(), gaps.end());
  out.diagnostics.max_arclength_defect = *std::max_element(defects.begin(), defects.end());
  return out;
}

struct WilsonLoop {
  double phase = 0.0;
  double unwrapped = 0.0;
  double min_overlap = 1.0;
};

/// gamma = -arg prod_j <psi_j|psi_{j+1}>, closing back to psi_0. Invariant
/// under any per-point phase of the inputs.
inline WilsonLoop wilson_loop_phase(std::span<const CVector> states) {
  WilsonLoop w;
  Complex product{1.0};
  const std::size_t m = states.size();
  for (std::size_t j = 0; j < m; ++j) {
    const auto& a = states[j];
    const auto& b = states[(j + 1) % m];
    const Complex ov = inner(a, b) / (norm2(a) * norm2(b));
    w.min_overlap = std::min(w.min_overlap, std::abs(ov));
    w.unwrapped -= std::arg(ov);
    product *= ov;
  }
  w.phase = -std::arg(product);
  if (w.phase <= -pi) w.phase += 2.0 * pi;
  return w;
}

inline HolonomyResult berry_phase_wilson_loop(const DeformableCurve& curve, int sigma,
                                              const ParameterLoop& loop, const SGrid& grid,
                                              const HolonomyOptions& opts = {}) {
  LoopStates ls = loop_ground_states(curve, sigma, loop, grid, opts);
  const WilsonLoop w = wilson_loop_phase(ls.states);
  ls.diagnostics.min_overlap = w.min_overlap;
  if (w.min_overlap < opts.min_overlap)
    throw Error(ErrorKind::overlap_too_small,
                "min overlap " + std::to_string(w.min_overlap) + " < " +
                    std::to_string(opts.min_overlap) + "; increase the number of loop points");
  HolonomyResult r;
  r.kind = HolonomyKind::abelian_phase;
  r.phase = w.phase;
  r.unwrapped_phase = w.unwrapped;
  r.sector_phases = {w.phase};
  r.diagnostics = ls.diagnostics;
  return r;
}

/// Wilson loop around the counterclockwise square of side delta, divided
/// by 2 delta^2: the factor 2 matches K counted over both index orders.
inline HolonomyResult berry_curvature_plaquette(const DeformableCurve& curve, int sigma,
                                                ParamPoint center, double delta,
                                                const SGrid& grid,
                                                const HolonomyOptions& opts = {}) {
  if (!(delta > 0.0)) throw Error(ErrorKind::config, "plaquette side must be positive");
  HolonomyResult r =
      berry_phase_wilson_loop(curve, sigma, ParameterLoop::plaquette(center, delta), grid, opts);
  r.kind = HolonomyKind::curvature;
  r.curvature = r.phase / (2.0 * delta * delta);
  return r;
}

/// Non-abelian transport of the doublet {sigma = +1, sigma = -1}.
///
/// The doublet states are chi_sigma (x) psi_sigma(s). Step j contributes
/// T_j[a][b] = <chi_a|chi_b> <psi_a(p_{j+1})|psi_b(p_j)>, and the loop
/// product U = T_{M-1} ... T_0 is unitarized by polar decomposition at the
/// end. Diagonal entries are e^{i gamma_sigma}.
inline HolonomyResult wilczek_zee_transport(const DeformableCurve& curve,
                                            const ParameterLoop& loop, const SGrid& grid,
                                            const HolonomyOptions& opts = {}) {
  const std::array<int, 2> sectors{1, -1};
  std::array<LoopStates, 2> ls{loop_ground_states(curve, sectors[0], loop, grid, opts),
                               loop_ground_states(curve, sectors[1], loop, grid, opts)};
  const Matrix gram = normal_overlap_matrix();
  const std::size_t m = loop.size();

  HolonomyDiagnostics diag = ls[0].diagnostics;
  diag.min_gap = std::min(ls[0].diagnostics.min_gap, ls[1].diagnostics.min_gap);
  diag.max_arclength_defect =
      std::max(ls[0].diagnostics.max_arclength_defect, ls[1].diagnostics.max_arclength_defect);

  Matrix u = Matrix::identity(2);
  for (std::size_t j = 0; j < m; ++j) {
    Matrix step(2, 2);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        const CVector& next = ls[a].states[(j + 1) % m];
        const CVector& cur = ls[b].states[j];
        step(a, b) = gram(a, b) * inner(next, cur) / (norm2(next) * norm2(cur));
      }
    diag.min_overlap =
        std::min({diag.min_overlap, std::abs(step(0, 0)), std::abs(step(1, 1))});
    u = step * u;
  }
  if (diag.min_overlap < opts.min_overlap)
    throw Error(ErrorKind::overlap_too_small,
                "min overlap " + std::to_string(diag.min_overlap) +
                    "; increase the number of loop points");

  HolonomyResult r;
  r.kind = HolonomyKind::wilczek_zee;
  r.unitary = unitary_polar(u);
  r.sector_phases = {std::arg(r.unitary(0, 0)), std::arg(r.unitary(1, 1))};
  r.diagnostics = diag;
  return r;
}

struct DoubletCoefficients {
  Complex plus;
  Complex minus;
  double gamma = 0.0;  ///< accumulated relative angle m * delta_phi
};

/// After m revolutions the doublet (|+> + |->)/sqrt 2 becomes
/// (e^{i m dphi}|+> + e^{-i m dphi}|->)/sqrt 2.
inline DoubletCoefficients accumulate_revolutions(double delta_phi, long m) {
  if (m < 0) throw Error(ErrorKind::config, "revolution count must be >= 0");
  const double g = static_cast<double>(m) * delta_phi;
  return {std::polar(1.0 / std::sqrt(2.0), g), std::polar(1.0 / std::sqrt(2.0), -g), g};
}

}  // namespace qwire

#pragma once

// Two-parameter families of closed space curves with trigonometric
// polynomial coordinates, linear in the deformation parameters, and their
// Frenet data.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qwire/errors.hpp"
#include "qwire/linalg.hpp"
#include "qwire/spectral.hpp"

namespace qwire {

/// A point (xi, zeta) in deformation-parameter space.
struct ParamPoint {
  double xi = 0.0;
  double zeta = 0.0;
  friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

enum class Direction { xi, zeta };

inline const char* to_string(Direction d) { return d == Direction::xi ? "xi" : "zeta"; }

/// a cos(m s) + b sin(m s)
struct TrigTerm {
  int harmonic = 0;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(std::initializer_list<TrigTerm> terms) : terms_(terms) { validate(); }
  explicit TrigPoly(std::vector<TrigTerm> terms) : terms_(std::move(terms)) { validate(); }

  const std::vector<TrigTerm>& terms() const { return terms_; }

  /// order-th derivative in s, evaluated analytically.
  double eval(double s, int order = 0) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
      const double m = t.harmonic;
      if (t.harmonic == 0) {
        if (order == 0) acc += t.cos_coef;
        continue;
      }
      // d^k/ds^k cos(ms) = m^k cos(ms + k pi/2), likewise for sin.
      const double scale = std::pow(m, order);
      const double shift = 0.5 * pi * order;
      acc += scale * (t.cos_coef * std::cos(m * s + shift) + t.sin_coef * std::sin(m * s + shift));
    }
    return acc;
  }

  /// sum_i weight_i * poly_i with like harmonics merged.
  static TrigPoly linear_combination(std::span<const TrigPoly* const> polys,
                                     std::span<const double> weights) {
    std::map<int, std::pair<double, double>> acc;
    for (std::size_t i = 0; i < polys.size(); ++i)
      for (const auto& t : polys[i]->terms()) {
        auto& slot = acc[t.harmonic];
        slot.first += weights[i] * t.cos_coef;
        slot.second += weights[i] * t.sin_coef;
      }
    std::vector<TrigTerm> terms;
    for (const auto& [m, ab] : acc) terms.push_back({m, ab.first, ab.second});
    return TrigPoly(std::move(terms));
  }

 private:
  void validate() const {
    for (const auto& t : terms_)
      if (t.harmonic < 0) throw Error(ErrorKind::config, "trigonometric harmonic must be >= 0");
  }

  std::vector<TrigTerm> terms_;
};

using CoordinatePolys = std::array<TrigPoly, 3>;

/// R(s; xi, zeta) = base(s) + xi * xi_term(s) + zeta * zeta_term(s).
class DeformableCurve {
 public:
  DeformableCurve() = default;
  DeformableCurve(CoordinatePolys base, CoordinatePolys xi_term, CoordinatePolys zeta_term)
      : base_(std::move(base)), xi_(std::move(xi_term)), zeta_(std::move(zeta_term)) {}

  const CoordinatePolys& base() const { return base_; }
  const CoordinatePolys& term(Direction d) const { return d == Direction::xi ? xi_ : zeta_; }

  /// order-th s-derivative of R at (p, s).
  Vec3 derivative(ParamPoint p, double s, int order) const {
    Vec3 r;
    for (std::size_t c = 0; c < 3; ++c)
      r[c] = base_[c].eval(s, order) + p.xi * xi_[c].eval(s, order) +
             p.zeta * zeta_[c].eval(s, order);
    return r;
  }
  Vec3 position(ParamPoint p, double s) const { return derivative(p, s, 0); }

  /// Velocity dR/d(direction), independent of the parameters.
  Vec3 velocity(Direction d, double s) const {
    const auto& t = term(d);
    return {t[0].eval(s), t[1].eval(s), t[2].eval(s)};
  }

  /// Applies x -> rotation * x + translation to every coefficient set.
  DeformableCurve transformed(const std::array<std::array<double, 3>, 3>& rotation,
                              Vec3 translation) const {
    auto apply = [&](const CoordinatePolys& in, bool shift) {
      CoordinatePolys out;
      const std::array<const TrigPoly*, 3> ptrs{&in[0], &in[1], &in[2]};
      for (std::size_t r = 0; r < 3; ++r) {
        const std::array<double, 3> w{rotation[r][0], rotation[r][1], rotation[r][2]};
        out[r] = TrigPoly::linear_combination(ptrs, w);
        if (shift) {
          const TrigPoly t{{0, translation[r], 0.0}};
          const std::array<const TrigPoly*, 2> two{&out[r], &t};
          const std::array<double, 2> ones{1.0, 1.0};
          out[r] = TrigPoly::linear_combination(two, ones);
        }
      }
      return out;
    };
    return {apply(base_, true), apply(xi_, false), apply(zeta_, false)};
  }

 private:
  CoordinatePolys base_, xi_, zeta_;
};

/// Unit circle deformed by xi(-cos^3 s, sin^3 s, 0) + zeta(0, 0, cos 2s).
inline DeformableCurve paper_family() {
  CoordinatePolys base{TrigPoly{{1, 1.0, 0.0}}, TrigPoly{{1, 0.0, 1.0}}, TrigPoly{}};
  // cos^3 = (3 cos s + cos 3s)/4, sin^3 = (3 sin s - sin 3s)/4
  CoordinatePolys xi{TrigPoly{{1, -0.75, 0.0}, {3, -0.25, 0.0}},
                     TrigPoly{{1, 0.0, 0.75}, {3, 0.0, -0.25}}, TrigPoly{}};
  CoordinatePolys zeta{TrigPoly{}, TrigPoly{}, TrigPoly{{2, 1.0, 0.0}}};
  return {base, xi, zeta};
}

inline DeformableCurve unit_circle() {
  return {CoordinatePolys{TrigPoly{{1, 1.0, 0.0}}, TrigPoly{{1, 0.0, 1.0}}, TrigPoly{}}, {}, {}};
}

/// Sign applied to the torsion. `standard` is B' = -tau N; `flipped`
/// exists only as a negative control for convention checks.
enum class TorsionConvention { standard, flipped };

struct GeometryProfile {
  SGrid grid;
  RVector kappa;
  RVector tau;
  RVector tau_prime;
  RVector speed;
};

struct FrenetFrame {
  Vec3 tangent, normal, binormal;
};

inline constexpr double degenerate_frame_tolerance = 1e-10;

inline FrenetFrame frenet_frame(const DeformableCurve& curve, ParamPoint p, double s) {
  const Vec3 d1 = curve.derivative(p, s, 1);
  const Vec3 d2 = curve.derivative(p, s, 2);
  const Vec3 c = cross(d1, d2);
  const double cn = norm(c);
  if (cn < degenerate_frame_tolerance)
    throw Error(ErrorKind::degenerate_frame, "|R' x R''| vanishes at s=" + std::to_string(s));
  FrenetFrame f;
  f.tangent = (1.0 / norm(d1)) * d1;
  f.binormal = (1.0 / cn) * c;
  f.normal = cross(f.binormal, f.tangent);
  return f;
}

/// kappa = |R' x R''| / |R'|^3, tau = (R' x R'') . R''' / |R' x R''|^2 with
/// analytic derivatives of the coefficients; tau' by spectral
/// differentiation of the sampled tau.
inline GeometryProfile frenet_profile(const DeformableCurve& curve, ParamPoint p, const SGrid& grid,
                                      TorsionConvention convention = TorsionConvention::standard) {
  const std::size_t n = grid.size();
  GeometryProfile g{grid, RVector(n), RVector(n), RVector(n), RVector(n)};
  const double sign = convention == TorsionConvention::standard ? 1.0 : -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid.s(i);
    const Vec3 d1 = curve.derivative(p, s, 1);
    const Vec3 d2 = curve.derivative(p, s, 2);
    const Vec3 d3 = curve.derivative(p, s, 3);
    const Vec3 c = cross(d1, d2);
    const double cn = norm(c);
    if (cn < degenerate_frame_tolerance)
      throw Error(ErrorKind::degenerate_frame, "|R' x R''| vanishes at s=" + std::to_string(s));
    const double sp = norm(d1);
    g.speed[i] = sp;
    g.kappa[i] = cn / (sp * sp * sp);
    g.tau[i] = sign * dot(c, d3) / (cn * cn);
  }
  g.tau_prime = spectral_derivative(grid, g.tau);
  return g;
}

/// max_s | |dR/ds| - 1 | on the grid.
inline double arclength_defect(const DeformableCurve& curve, ParamPoint p,
                               const SGrid& grid = SGrid(256)) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(norm(curve.derivative(p, grid.s(i), 1)) - 1.0));
  return worst;
}

/// Deformation velocity at xi = zeta = 0, in Cartesian and Frenet components.
struct DeformationField {
  SGrid grid;
  std::vector<Vec3> velocity;
  RVector tangential, normal, binormal;
};

inline DeformationField deformation_field(const DeformableCurve& curve, Direction d,
                                          const SGrid& grid) {
  const std::size_t n = grid.size();
  DeformationField f{grid, std::vector<Vec3>(n), RVector(n), RVector(n), RVector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid.s(i);
    const Vec3 v = curve.velocity(d, s);
    const FrenetFrame fr = frenet_frame(curve, {}, s);
    f.velocity[i] = v;
    f.tangential[i] = dot(v, fr.tangent);
    f.normal[i] = dot(v, fr.normal);
    f.binormal[i] = dot(v, fr.binormal);
  }
  return f;
}

/// Builds a field from given Frenet components; used for hand-made fields.
inline DeformationField deformation_field_from_components(const SGrid& grid, RVector tangential,
                                                          RVector normal, RVector binormal) {
  if (tangential.size() != grid.size() || normal.size() != grid.size() ||
      binormal.size() != grid.size())
    throw Error(ErrorKind::grid_mismatch, "component arrays differ from grid size");
  return {grid, {}, std::move(tangential), std::move(normal), std::move(binormal)};
}

/// max | d_l v^t - kappa v^n | with d_l = |R'|^{-1} d_s (arclength derivative).
inline double check_locally_arclength_preserving(const DeformationField& field,
                                                 const GeometryProfile& base) {
  if (!(field.grid == base.grid))
    throw Error(ErrorKind::grid_mismatch, "deformation field and profile use different grids");
  const RVector dvt = spectral_derivative(field.grid, field.tangential);
  double worst = 0.0;
  for (std::size_t i = 0; i < dvt.size(); ++i)
    worst = std::max(worst, std::abs(dvt[i] / base.speed[i] - base.kappa[i] * field.normal[i]));
  return worst;
}

}  // namespace qwire

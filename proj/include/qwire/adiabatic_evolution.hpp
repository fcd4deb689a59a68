#pragma once

// Time-dependent Schroedinger propagation of the tangential ground state
// while the curve is driven around a loop in (xi, zeta), with separation of
// the accumulated phase into dynamical and geometric parts.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qwire/curve_geometry.hpp"
#include "qwire/errors.hpp"
#include "qwire/holonomy.hpp"
#include "qwire/linalg.hpp"
#include "qwire/parallel.hpp"
#include "qwire/spectral.hpp"
#include "qwire/tangential_hamiltonian.hpp"

namespace qwire {

/// (xi, zeta)(t) = (eps (1 - cos lambda t), -+ eps sin lambda t); the sign
/// of zeta follows the orientation, counterclockwise by default.
struct DrivingSchedule {
  double epsilon = 0.05;
  double rate = 1e-3;        ///< lambda, angular driving rate
  double duration = 0.0;     ///< total time T
  double dt = 0.0;           ///< 0 selects the step automatically
  Orientation orientation = Orientation::counterclockwise;
  std::size_t band_levels = 2;  ///< levels that set the automatic step
  double phase_budget = 0.1;    ///< max phase per step across that band

  static DrivingSchedule revolutions(double eps, double rate, double m) {
    if (!(rate > 0.0)) throw Error(ErrorKind::config, "driving rate must be positive");
    DrivingSchedule d;
    d.epsilon = eps;
    d.rate = rate;
    d.duration = 2.0 * pi * m / rate;
    return d;
  }

  ParamPoint at(double t) const {
    const double th = rate * t;
    const double sense = orientation == Orientation::counterclockwise ? -1.0 : 1.0;
    return {epsilon * (1.0 - std::cos(th)), sense * epsilon * std::sin(th)};
  }
};

struct PropagationOptions {
  double norm_tolerance = 1e-8;
  double min_population = 0.99;
  bool throw_on_adiabaticity_loss = true;
  bool record_trace = false;
  std::size_t trace_stride = 1;
  TorsionConvention convention = TorsionConvention::standard;
};

struct TraceRow {
  double t, xi, zeta, energy, population, total_phase, dynamical_phase;
};

struct PropagationResult {
  CVector final_state;
  double total_phase = 0.0;       ///< unwrapped arg <psi_inst(T)|psi(T)>
  double dynamical_phase = 0.0;   ///< integral of E_0 dt
  double geometric_phase = 0.0;   ///< total + dynamical
  double final_population = 1.0;
  double min_population = 1.0;
  double max_norm_drift = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<TraceRow> trace;
};

/// One midpoint Crank-Nicolson step with H - shift:
/// (1 + i dt H/2) psi_new = (1 - i dt H/2) psi.
inline CVector crank_nicolson_step(const Matrix& h, double shift, double dt,
                                   std::span<const Complex> psi) {
  const std::size_t n = h.rows();
  Matrix lhs(n, n), rhs(n, n);
  const Complex half = 0.5 * I * dt;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex hij = h(i, j);
      if (i == j) hij -= shift;
      const Complex id = i == j ? Complex{1.0} : Complex{};
      lhs(i, j) = id + half * hij;
      rhs(i, j) = id - half * hij;
    }
  return lu_solve(std::move(lhs), rhs * psi);
}

namespace detail {

inline double wrap_pi(double a) {
  while (a > pi) a -= 2.0 * pi;
  while (a <= -pi) a += 2.0 * pi;
  return a;
}

inline std::size_t step_count(const DrivingSchedule& sched, double auto_dt) {
  const double dt = sched.dt > 0.0 ? sched.dt : auto_dt;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(sched.duration / dt - 1e-9)));
}

/// Follows the ground state from the previous step by inverse iteration
/// shifted just below the previous energy; a full solve is the fallback.
inline EigenPair track_ground_state(const TangentialHamiltonian& h, const EigenPair& prev) {
  Matrix shifted = h.matrix;
  const double mu = prev.value - 1e-3;
  for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) -= mu;
  const LuFactorization lu(std::move(shifted));
  CVector v = prev.vector;
  for (int it = 0; it < 4; ++it) {
    v = lu.solve(v);
    const double nrm = grid_norm(h.grid, v);
    for (auto& x : v) x /= nrm;
    const CVector hv = h.matrix * v;
    const double e = grid_inner(h.grid, v, hv).real();
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res = std::max(res, std::abs(hv[i] - e * v[i]));
    if (res < 1e-10 * std::max(1.0, std::abs(e))) return {e, std::move(v)};
  }
  return eigensolve(h, 1).front();
}

}  // namespace detail

/// Automatic step: phase_budget / (E_{band} - E_0) at t = 0.
inline double automatic_step(const DeformableCurve& curve, int sigma,
                             const DrivingSchedule& sched, const SGrid& grid,
                             TorsionConvention convention = TorsionConvention::standard) {
  const std::size_t band = std::clamp<std::size_t>(sched.band_levels, 2, grid.size());
  const auto pairs = eigensolve(build_hamiltonian(curve, sched.at(0.0), sigma, grid, convention), band);
  return sched.phase_budget / (pairs.back().value - pairs.front().value);
}

/// Propagates the instantaneous ground state at t = 0 over the schedule.
///
/// The Hamiltonian is shifted by the initial ground energy during stepping
/// and the shift is restored analytically, so the Crank-Nicolson phase
/// error acts only on the small energy variation along the loop.
/// Instantaneous states use the gauge <psi_inst(0)|psi_inst(t)> > 0, which
/// is single valued on a closed loop.
inline PropagationResult propagate(const DeformableCurve& curve, int sigma,
                                   const DrivingSchedule& sched, const SGrid& grid,
                                   const PropagationOptions& opts = {}) {
  check_sigma(sigma);
  if (!(sched.duration >= 0.0)) throw Error(ErrorKind::config, "duration must be >= 0");

  const GroundState g0 = ground_state_k0(build_hamiltonian(curve, sched.at(0.0), sigma, grid,
                                                           opts.convention));
  const double e_ref = g0.state.value;
  const CVector& psi_ref = g0.state.vector;

  PropagationResult r;
  r.steps = detail::step_count(sched, automatic_step(curve, sigma, sched, grid, opts.convention));
  r.dt = r.steps > 0 ? sched.duration / static_cast<double>(r.steps) : 0.0;
  const double dt = r.dt;

  CVector psi = psi_ref;
  EigenPair inst = g0.state;
  double shifted_total = 0.0, shifted_dyn = 0.0, prev_arg = 0.0, prev_e = e_ref;
  auto record = [&](double t, ParamPoint p, double e, double pop) {
    r.trace.push_back({t, p.xi, p.zeta, e, pop, shifted_total - e_ref * t,
                       shifted_dyn + e_ref * t});
  };
  if (opts.record_trace) record(0.0, sched.at(0.0), e_ref, 1.0);

  for (std::size_t n = 0; n < r.steps; ++n) {
    const double t0 = dt * static_cast<double>(n);
    const double t1 = t0 + dt;
    const Matrix hm =
        build_hamiltonian(curve, sched.at(t0 + 0.5 * dt), sigma, grid, opts.convention).matrix;
    psi = crank_nicolson_step(hm, e_ref, dt, psi);

    const ParamPoint p1 = sched.at(t1);
    inst = detail::track_ground_state(build_hamiltonian(curve, p1, sigma, grid, opts.convention), inst);
    const Complex gauge = grid_inner(grid, psi_ref, inst.vector);
    inst.vector = scaled(inst.vector, std::conj(gauge) / std::abs(gauge));

    const double nrm = grid_norm(grid, psi);
    r.max_norm_drift = std::max(r.max_norm_drift, std::abs(nrm - 1.0));
    if (std::abs(nrm - 1.0) > opts.norm_tolerance)
      throw Error(ErrorKind::norm_drift, "norm drifted to " + std::to_string(nrm) + " at t=" +
                                             std::to_string(t1));

    const Complex ov = grid_inner(grid, inst.vector, psi);
    const double pop = std::norm(ov);
    r.min_population = std::min(r.min_population, pop);
    r.final_population = pop;
    if (pop < opts.min_population && opts.throw_on_adiabaticity_loss)
      throw Error(ErrorKind::adiabaticity_loss, "ground-state population " + std::to_string(pop) +
                                                    " at t=" + std::to_string(t1));

    const double a = std::arg(ov);
    shifted_total += detail::wrap_pi(a - prev_arg);
    prev_arg = a;
    shifted_dyn += 0.5 * dt * ((prev_e - e_ref) + (inst.value - e_ref));
    prev_e = inst.value;

    if (opts.record_trace && ((n + 1) % std::max<std::size_t>(opts.trace_stride, 1) == 0 ||
                              n + 1 == r.steps))
      record(t1, p1, inst.value, pop);
  }

  r.final_state = std::move(psi);
  r.total_phase = shifted_total - e_ref * sched.duration;
  r.dynamical_phase = shifted_dyn + e_ref * sched.duration;
  r.geometric_phase = r.total_phase + r.dynamical_phase;
  return r;
}

/// Evolves an arbitrary state over the schedule, forward from t = 0 or
/// backward from t = T. Backward steps invert forward ones exactly.
inline CVector evolve_state(const DeformableCurve& curve, int sigma, const DrivingSchedule& sched,
                            const SGrid& grid, CVector psi, bool backward = false,
                            TorsionConvention convention = TorsionConvention::standard) {
  check_sigma(sigma);
  const std::size_t steps =
      detail::step_count(sched, automatic_step(curve, sigma, sched, grid, convention));
  const double dt = sched.duration / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t n = backward ? steps - 1 - k : k;
    const double tm = dt * (static_cast<double>(n) + 0.5);
    const Matrix hm = build_hamiltonian(curve, sched.at(tm), sigma, grid, convention).matrix;
    psi = crank_nicolson_step(hm, 0.0, backward ? -dt : dt, psi);
  }
  return psi;
}

struct SweepRow {
  double rate = 0.0;
  double geometric_phase = 0.0;
  double error = 0.0;  ///< |geometric - reference|
  double final_population = 1.0;
  double min_population = 1.0;
  bool adiabatic = true;  ///< min population stayed above the threshold
  std::string failure;    ///< numerical error message, empty on success
};

/// One revolution per rate, run in parallel; compares each geometric phase
/// with `reference` (normally the Wilson-loop value).
inline std::vector<SweepRow> adiabaticity_sweep(const DeformableCurve& curve, int sigma, double eps,
                                                std::span<const double> rates, const SGrid& grid,
                                                double reference, std::size_t threads = 0,
                                                PropagationOptions opts = {}) {
  opts.throw_on_adiabaticity_loss = false;
  std::vector<SweepRow> rows(rates.size());
  parallel_for(rates.size(), threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.rate = rates[i];
    try {
      const auto res = propagate(curve, sigma, DrivingSchedule::revolutions(eps, rates[i], 1.0),
                                 grid, opts);
      row.geometric_phase = res.geometric_phase;
      row.error = std::abs(res.geometric_phase - reference);
      row.final_population = res.final_population;
      row.min_population = res.min_population;
      row.adiabatic = res.min_population >= opts.min_population;
    } catch (const Error& e) {
      row.adiabatic = false;
      row.failure = e.what();
    }
  });
  return rows;
}

}  // namespace qwire

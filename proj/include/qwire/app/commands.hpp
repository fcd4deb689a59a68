#pragma once

// The subcommands behind the CLI. Each takes a validated RunConfig, writes
// its files into `out`, and returns the JSON document it wrote.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "qwire/adiabatic_evolution.hpp"
#include "qwire/app/config.hpp"
#include "qwire/app/output.hpp"
#include "qwire/curve_geometry.hpp"
#include "qwire/holonomy.hpp"
#include "qwire/normal_modes.hpp"
#include "qwire/perturbation.hpp"
#include "qwire/tangential_hamiltonian.hpp"

namespace qwire::app {

namespace fs = std::filesystem;

struct Context {
  RunConfig config;
  fs::path out;
  std::size_t threads = 0;
};

inline HolonomyOptions holonomy_options(const Context& ctx) {
  HolonomyOptions o;
  o.threads = ctx.threads;
  o.min_overlap = ctx.config.tolerances.min_overlap;
  o.min_gap = ctx.config.tolerances.min_gap;
  o.convention = ctx.config.convention;
  return o;
}

inline PropagationOptions propagation_options(const Context& ctx) {
  PropagationOptions o;
  o.norm_tolerance = ctx.config.tolerances.norm;
  o.min_population = ctx.config.tolerances.min_population;
  o.convention = ctx.config.convention;
  return o;
}

inline ParameterLoop config_loop(const RunConfig& c) {
  return ParameterLoop::driving_circle(c.loop.epsilon, c.loop.points, c.loop.orientation);
}

inline json complex_json(Complex z) { return {z.real(), z.imag()}; }

inline json cmd_geometry(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const SGrid grid(c.grid);
  const auto curve = make_curve(c);
  const auto prof = frenet_profile(curve, c.point, grid, c.convention);

  CsvWriter csv(ctx.out / "geometry.csv", {"s", "kappa", "tau", "tau_prime", "speed"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    csv.row({grid.s(i), prof.kappa[i], prof.tau[i], prof.tau_prime[i], prof.speed[i]});

  json j = metadata("geometry", c, c.grid);
  j["point"] = {{"xi", c.point.xi}, {"zeta", c.point.zeta}};
  j["torsion_convention"] = detail::to_string(c.convention);
  j["min_kappa"] = *std::min_element(prof.kappa.begin(), prof.kappa.end());
  j["max_abs_tau"] = std::abs(*std::max_element(prof.tau.begin(), prof.tau.end(),
                                                [](double a, double b) { return std::abs(a) < std::abs(b); }));
  j["arclength_defect"] = arclength_defect(curve, c.point);
  j["files"] = {"geometry.csv"};
  write_json(ctx.out / "geometry.json", j);
  return j;
}

inline json cmd_spectrum(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const SGrid grid(c.grid);
  const auto h = build_hamiltonian(make_curve(c), c.point, c.sigma, grid, c.convention);
  const auto pairs = eigensolve(h, std::max<std::size_t>(c.levels, 2));

  std::vector<double> energies;
  for (std::size_t i = 0; i < c.levels; ++i) energies.push_back(pairs[i].value);
  const double gap = pairs[1].value - pairs[0].value;

  CsvWriter csv(ctx.out / "ground_state.csv", {"s", "density", "re", "im"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex v = pairs[0].vector[i];
    csv.row({grid.s(i), std::norm(v), v.real(), v.imag()});
  }

  json j = metadata("spectrum", c, c.grid);
  j["point"] = {{"xi", c.point.xi}, {"zeta", c.point.zeta}};
  j["sigma"] = c.sigma;
  j["energies"] = energies;
  j["gap"] = gap;
  j["gap_margin"] = gap - c.tolerances.min_gap;
  j["files"] = {"ground_state.csv"};
  write_json(ctx.out / "spectrum.json", j);
  return j;
}

inline json cmd_holonomy(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const SGrid grid(c.grid);
  const auto curve = make_curve(c);
  const auto opts = holonomy_options(ctx);
  const auto loop = config_loop(c);

  const auto wilson = berry_phase_wilson_loop(curve, c.sigma, loop, grid, opts);
  const auto plaq = berry_curvature_plaquette(curve, c.sigma, c.point, c.plaquette_delta, grid, opts);
  const auto wz = wilczek_zee_transport(curve, loop, grid, opts);
  const double k_analytic = analytic_curvature(c.sigma, grid);
  const double expected = per_revolution_phase(c.loop.epsilon, k_analytic);

  json j = metadata("holonomy", c, c.grid);
  j["sigma"] = c.sigma;
  j["loop"] = {{"epsilon", c.loop.epsilon},
               {"points", c.loop.points},
               {"orientation", detail::to_string(c.loop.orientation)},
               {"signed_area", loop.signed_area()}};
  j["wilson_loop"] = {{"phase", wilson.phase},
                      {"unwrapped_phase", wilson.unwrapped_phase},
                      {"expected_first_order", expected},
                      {"rel_err", expected != 0.0 ? std::abs(wilson.phase - expected) / std::abs(expected) : 0.0},
                      {"min_overlap", wilson.diagnostics.min_overlap},
                      {"min_gap", wilson.diagnostics.min_gap},
                      {"max_arclength_defect", wilson.diagnostics.max_arclength_defect}};
  j["curvature"] = {{"center", {{"xi", c.point.xi}, {"zeta", c.point.zeta}}},
                    {"delta", c.plaquette_delta},
                    {"K_numeric", plaq.curvature},
                    {"K_analytic", k_analytic},
                    {"rel_err", std::abs(plaq.curvature - k_analytic) / std::abs(k_analytic)}};
  const auto& u = wz.unitary;
  j["wilczek_zee"] = {{"unitary",
                       {{complex_json(u(0, 0)), complex_json(u(0, 1))},
                        {complex_json(u(1, 0)), complex_json(u(1, 1))}}},
                      {"sector_phases", wz.sector_phases},
                      {"max_offdiag", std::max(std::abs(u(0, 1)), std::abs(u(1, 0)))},
                      {"min_overlap", wz.diagnostics.min_overlap}};
  write_json(ctx.out / "holonomy.json", j);
  return j;
}

inline json cmd_evolve(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const SGrid grid(c.schedule.grid);
  const auto curve = make_curve(c);

  DrivingSchedule sched = DrivingSchedule::revolutions(c.loop.epsilon, c.schedule.rate, c.schedule.revolutions);
  sched.dt = c.schedule.dt;
  sched.orientation = c.loop.orientation;
  auto popts = propagation_options(ctx);
  popts.record_trace = true;
  popts.trace_stride = c.schedule.trace_stride;
  const auto r = propagate(curve, c.sigma, sched, grid, popts);

  const double one_rev =
      berry_phase_wilson_loop(curve, c.sigma, config_loop(c), grid, holonomy_options(ctx)).phase;
  const double reference = c.schedule.revolutions * one_rev;

  CsvWriter trace(ctx.out / "evolve_trace.csv",
                  {"t", "xi", "zeta", "energy", "population", "total_phase", "dynamical_phase"});
  for (const auto& row : r.trace)
    trace.row({row.t, row.xi, row.zeta, row.energy, row.population, row.total_phase, row.dynamical_phase});

  json j = metadata("evolve", c, c.schedule.grid);
  j["sigma"] = c.sigma;
  j["schedule"] = {{"epsilon", c.loop.epsilon},
                   {"rate", c.schedule.rate},
                   {"revolutions", c.schedule.revolutions},
                   {"duration", sched.duration},
                   {"dt", r.dt},
                   {"steps", r.steps}};
  j["geometric_phase"] = r.geometric_phase;
  j["total_phase"] = r.total_phase;
  j["dynamical_phase"] = r.dynamical_phase;
  j["wilson_reference"] = reference;
  j["rel_err"] = reference != 0.0 ? std::abs(r.geometric_phase - reference) / std::abs(reference) : 0.0;
  j["final_population"] = r.final_population;
  j["min_population"] = r.min_population;
  j["max_norm_drift"] = r.max_norm_drift;
  j["files"] = {"evolve_trace.csv"};

  if (!c.schedule.sweep_rates.empty()) {
    // each sweep entry is a single revolution
    const auto rows = adiabaticity_sweep(curve, c.sigma, c.loop.epsilon, c.schedule.sweep_rates, grid,
                                         one_rev, ctx.threads, propagation_options(ctx));
    CsvWriter sweep(ctx.out / "sweep.csv",
                    {"rate", "geometric_phase", "abs_error", "final_population", "min_population", "adiabatic"});
    json failures = json::array();
    for (const auto& row : rows) {
      sweep.row({row.rate, row.geometric_phase, row.error, row.final_population, row.min_population,
                 row.adiabatic ? 1.0 : 0.0});
      if (!row.failure.empty()) failures.push_back({{"rate", row.rate}, {"message", row.failure}});
    }
    j["sweep_failures"] = failures;
    j["files"].push_back("sweep.csv");
  }
  write_json(ctx.out / "evolve.json", j);
  return j;
}

inline void write_tube_csv(const fs::path& path, const TubeField& f) {
  CsvWriter csv(path, {"s", "alpha", "beta", "x", "y", "z", "density"});
  for (const auto& t : f.samples)
    csv.row({t.s, t.alpha, t.beta, t.position.x, t.position.y, t.position.z, t.density});
}

inline TubeOptions tube_options(const RunConfig& c) {
  return {c.tube.eta, c.tube.n_s, c.tube.n_transverse, c.tube.extent};
}

inline json cmd_tube(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const double dphi = per_revolution_phase(c.tube.epsilon, analytic_curvature(1, SGrid(c.grid)));
  const auto coeffs = accumulate_revolutions(dphi, c.tube.revolutions);
  const auto field = tube_density_grid(make_curve(c), c.point, coeffs.gamma, tube_options(c));
  write_tube_csv(ctx.out / "tube.csv", field);

  json j = metadata("tube", c, c.tube.n_s);
  j["delta_phi"] = dphi;
  j["revolutions"] = c.tube.revolutions;
  j["gamma"] = coeffs.gamma;
  j["coefficients"] = {{"plus", complex_json(coeffs.plus)}, {"minus", complex_json(coeffs.minus)}};
  j["eta"] = c.tube.eta;
  j["files"] = {"tube.csv"};
  write_json(ctx.out / "tube.json", j);
  return j;
}

}  // namespace qwire::app

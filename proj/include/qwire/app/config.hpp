#pragma once

// Run configuration for the command-line front end. JSON on disk; every
// field has a default, unknown keys are rejected, and validation happens
// before any computation.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwire/curve_geometry.hpp"
#include "qwire/errors.hpp"
#include "qwire/holonomy.hpp"
#include "qwire/spectral.hpp"

namespace qwire::app {

using json = nlohmann::ordered_json;

struct LoopConfig {
  double epsilon = 0.05;
  std::size_t points = 64;
  Orientation orientation = Orientation::counterclockwise;
};

struct ScheduleConfig {
  double rate = 1e-3;
  double revolutions = 1.0;
  double dt = 0.0;  // 0 = automatic
  std::size_t grid = 32;
  std::size_t trace_stride = 100;
  std::vector<double> sweep_rates;
};

struct TubeConfig {
  double eta = 0.1;
  std::size_t n_s = 64;
  std::size_t n_transverse = 21;
  double extent = 3.0;
  long revolutions = 0;
  double epsilon = 0.2;  // loop radius that sets the per-revolution phase
};

struct Tolerances {
  double min_gap = default_min_gap;
  double min_overlap = 0.9;
  double norm = 1e-8;
  double min_population = 0.99;
};

struct RunConfig {
  std::string name = "default";
  std::string curve = "paper";
  std::size_t grid = 64;
  int sigma = 1;
  TorsionConvention convention = TorsionConvention::standard;
  ParamPoint point{};
  std::size_t levels = 5;
  LoopConfig loop;
  double plaquette_delta = 1e-3;
  ScheduleConfig schedule;
  TubeConfig tube;
  Tolerances tolerances;
};

namespace detail {

inline std::string to_string(Orientation o) {
  return o == Orientation::counterclockwise ? "counterclockwise" : "clockwise";
}

inline std::string to_string(TorsionConvention c) {
  return c == TorsionConvention::standard ? "standard" : "flipped";
}

// Reads the keys of one JSON object, rejecting anything not consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.push_back(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || (std::is_unsigned_v<T> && !v.is_number_unsigned()))
        throw Error(ErrorKind::config, "'" + where(key) + "' must be " +
                                           (std::is_unsigned_v<T> ? "a non-negative integer" : "an integer"));
    }
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorKind::config, "wrong type for '" + where(key) + "'");
    }
  }

  const json* child(const char* key) {
    seen_.push_back(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
        throw Error(ErrorKind::config, "unknown key '" + where(key) + "'");
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::config, (path_.empty() ? std::string("config") : path_) + ": " + msg);
  }

  const json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

inline Orientation parse_orientation(const std::string& s) {
  if (s == "counterclockwise") return Orientation::counterclockwise;
  if (s == "clockwise") return Orientation::clockwise;
  throw Error(ErrorKind::config, "loop.orientation must be 'counterclockwise' or 'clockwise'");
}

inline TorsionConvention parse_convention(const std::string& s) {
  if (s == "standard") return TorsionConvention::standard;
  if (s == "flipped") return TorsionConvention::flipped;
  throw Error(ErrorKind::config, "torsion_convention must be 'standard' or 'flipped'");
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::config, msg);
}

}  // namespace detail

inline json to_json(const RunConfig& c) {
  return {
      {"name", c.name},
      {"curve", c.curve},
      {"grid", c.grid},
      {"sigma", c.sigma},
      {"torsion_convention", detail::to_string(c.convention)},
      {"point", {{"xi", c.point.xi}, {"zeta", c.point.zeta}}},
      {"levels", c.levels},
      {"loop",
       {{"epsilon", c.loop.epsilon},
        {"points", c.loop.points},
        {"orientation", detail::to_string(c.loop.orientation)}}},
      {"plaquette_delta", c.plaquette_delta},
      {"schedule",
       {{"rate", c.schedule.rate},
        {"revolutions", c.schedule.revolutions},
        {"dt", c.schedule.dt},
        {"grid", c.schedule.grid},
        {"trace_stride", c.schedule.trace_stride},
        {"sweep_rates", c.schedule.sweep_rates}}},
      {"tube",
       {{"eta", c.tube.eta},
        {"n_s", c.tube.n_s},
        {"n_transverse", c.tube.n_transverse},
        {"extent", c.tube.extent},
        {"revolutions", c.tube.revolutions},
        {"epsilon", c.tube.epsilon}}},
      {"tolerances",
       {{"min_gap", c.tolerances.min_gap},
        {"min_overlap", c.tolerances.min_overlap},
        {"norm", c.tolerances.norm},
        {"min_population", c.tolerances.min_population}}},
  };
}

/// Checks ranges; throws a config error naming the offending field.
inline void validate(const RunConfig& c) {
  using detail::require;
  require(c.curve == "paper" || c.curve == "circle", "curve must be 'paper' or 'circle'");
  require(c.grid % 2 == 0 && c.grid >= 16, "grid must be even and >= 16, got " + std::to_string(c.grid));
  require(c.sigma == 1 || c.sigma == -1, "sigma must be +1 or -1");
  require(std::isfinite(c.point.xi) && std::isfinite(c.point.zeta), "point must be finite");
  require(c.levels >= 1 && c.levels <= c.grid, "levels must lie in [1, grid]");
  require(c.loop.epsilon >= 0.0 && std::isfinite(c.loop.epsilon), "loop.epsilon must be >= 0");
  require(c.loop.points >= 8, "loop.points must be >= 8");
  require(c.plaquette_delta > 0.0, "plaquette_delta must be > 0");
  require(c.schedule.rate > 0.0, "schedule.rate must be > 0");
  require(c.schedule.revolutions >= 0.0, "schedule.revolutions must be >= 0");
  require(c.schedule.dt >= 0.0, "schedule.dt must be >= 0 (0 selects it automatically)");
  require(c.schedule.grid % 2 == 0 && c.schedule.grid >= 16, "schedule.grid must be even and >= 16");
  require(c.schedule.trace_stride >= 1, "schedule.trace_stride must be >= 1");
  for (double r : c.schedule.sweep_rates) require(r > 0.0, "schedule.sweep_rates must be > 0");
  require(c.tube.eta > 0.0, "tube.eta must be > 0");
  require(c.tube.n_s % 2 == 0 && c.tube.n_s >= 16, "tube.n_s must be even and >= 16");
  require(c.tube.n_transverse >= 2, "tube.n_transverse must be >= 2");
  require(c.tube.extent > 0.0, "tube.extent must be > 0");
  require(c.tube.revolutions >= 0, "tube.revolutions must be >= 0");
  require(c.tolerances.min_gap >= 0.0, "tolerances.min_gap must be >= 0");
  require(c.tolerances.min_overlap > 0.0 && c.tolerances.min_overlap <= 1.0,
          "tolerances.min_overlap must lie in (0, 1]");
  require(c.tolerances.norm > 0.0, "tolerances.norm must be > 0");
  require(c.tolerances.min_population > 0.0 && c.tolerances.min_population <= 1.0,
          "tolerances.min_population must lie in (0, 1]");
}

/// Overlays a JSON document on the defaults and validates the result.
inline RunConfig from_json(const json& j) {
  RunConfig c;
  detail::ObjectReader top(j, "");
  top.read("name", c.name);
  top.read("curve", c.curve);
  top.read("grid", c.grid);
  top.read("sigma", c.sigma);
  std::string conv = detail::to_string(c.convention);
  top.read("torsion_convention", conv);
  c.convention = detail::parse_convention(conv);
  if (const json* p = top.child("point")) {
    detail::ObjectReader r(*p, "point");
    r.read("xi", c.point.xi);
    r.read("zeta", c.point.zeta);
    r.finish();
  }
  top.read("levels", c.levels);
  if (const json* p = top.child("loop")) {
    detail::ObjectReader r(*p, "loop");
    r.read("epsilon", c.loop.epsilon);
    r.read("points", c.loop.points);
    std::string o = detail::to_string(c.loop.orientation);
    r.read("orientation", o);
    c.loop.orientation = detail::parse_orientation(o);
    r.finish();
  }
  top.read("plaquette_delta", c.plaquette_delta);
  if (const json* p = top.child("schedule")) {
    detail::ObjectReader r(*p, "schedule");
    r.read("rate", c.schedule.rate);
    r.read("revolutions", c.schedule.revolutions);
    r.read("dt", c.schedule.dt);
    r.read("grid", c.schedule.grid);
    r.read("trace_stride", c.schedule.trace_stride);
    r.read("sweep_rates", c.schedule.sweep_rates);
    r.finish();
  }
  if (const json* p = top.child("tube")) {
    detail::ObjectReader r(*p, "tube");
    r.read("eta", c.tube.eta);
    r.read("n_s", c.tube.n_s);
    r.read("n_transverse", c.tube.n_transverse);
    r.read("extent", c.tube.extent);
    r.read("revolutions", c.tube.revolutions);
    r.read("epsilon", c.tube.epsilon);
    r.finish();
  }
  if (const json* p = top.child("tolerances")) {
    detail::ObjectReader r(*p, "tolerances");
    r.read("min_gap", c.tolerances.min_gap);
    r.read("min_overlap", c.tolerances.min_overlap);
    r.read("norm", c.tolerances.norm);
    r.read("min_population", c.tolerances.min_population);
    r.finish();
  }
  top.finish();
  validate(c);
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::config, "config '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

inline DeformableCurve make_curve(const RunConfig& c) {
  return c.curve == "circle" ? unit_circle() : paper_family();
}

}  // namespace qwire::app

#pragma once

// Scenario files: JSON configuration, trajectory CSV and diagnostics JSON-lines.
//
//   {
//     "name": "torus_pair_translate",
//     "surface": {"kind": "torus", "tau": [0.0, 1.0]},
//     "vortices": [{"chart": 0, "coord": [0.25, 0.5], "strength": 1.0}, ...],
//     "base_circulations": {"a": [0.0], "b": [0.0]},
//     "integrator": {"method": "rk4", "dt": 1e-3, "steps": 1000, "record_every": 10,
//                    "handover_radius": 1.0, "collision_threshold": 1e-3},
//     "output": {"trajectory": "out.csv", "diagnostics": "out.jsonl", "kelvin_points": 512},
//     "tolerances": {"energy_drift": 1e-7, "kelvin_drift": 1e-8, "velocity_residual": 1e-6},
//     "seed": 0
//   }
//
// Complex numbers are [re, im]. Everything except "surface" and "vortices" has a default.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "vortex/dynamics.hpp"
#include "vortex/errors.hpp"
#include "vortex/state.hpp"
#include "vortex/surface.hpp"

namespace vortex {

class ConfigError : public VortexError {
 public:
  ConfigError(std::string field, const std::string& what, int line = 0)
      : VortexError(compose(field, what, line)), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string compose(const std::string& field, const std::string& what, int line) {
    std::string s = "config error";
    if (line > 0) s += " at line " + std::to_string(line);
    if (!field.empty()) s += " in '" + field + "'";
    return s + ": " + what;
  }
  std::string field_;
  int line_;
};

struct OutputSpec {
  std::string trajectory;   // empty: <name>.csv
  std::string diagnostics;  // empty: <name>.diagnostics.jsonl
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct Tolerances {
  double energy_drift = 1e-7;
  double kelvin_drift = 1e-8;
  double velocity_residual = 1e-6;
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  Surface surface = Surface::sphere();
  VortexState state;
  IntegratorOptions integrator;
  double collision_threshold = kDefaultCollisionThreshold;
  OutputSpec output;
  Tolerances tolerances;
  std::uint64_t seed = 0;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

  std::string trajectory_file() const { return output.trajectory.empty() ? name + ".csv" : output.trajectory; }
  std::string diagnostics_file() const {
    return output.diagnostics.empty() ? name + ".diagnostics.jsonl" : output.diagnostics;
  }
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
  }
}

inline const json& require(const json& j, const char* key, const std::string& where) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!j.is_object() || !j.contains(key)) throw ConfigError(field, "missing required field");
  return j.at(key);
}

inline double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "expected a finite number");
  return v;
}

inline long as_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  return j.get<long>();
}

inline cplx as_complex(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(field, "expected a [re, im] pair");
  return {as_number(j[0], field + "[0]"), as_number(j[1], field + "[1]")};
}

inline std::vector<double> as_reals(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
  return v;
}

template <class T, class Get>
void optional_field(const json& j, const char* key, const std::string& where, T& out, Get get) {
  if (j.contains(key)) out = get(j.at(key), where + "." + key);
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) line += text[i] == '\n';
  return line;
}

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) throw ConfigError("", "top level must be an object");
  reject_unknown(j, "", {"name", "surface", "vortices", "base_circulations", "integrator", "output", "tolerances", "seed"});
  ScenarioConfig c;
  if (j.contains("name")) {
    if (!j["name"].is_string() || j["name"].get<std::string>().empty()) throw ConfigError("name", "expected a non-empty string");
    c.name = j["name"].get<std::string>();
  }

  const json& sj = require(j, "surface", "");
  reject_unknown(sj, "surface", {"kind", "tau"});
  const json& kind = require(sj, "kind", "surface");
  if (kind == "sphere") {
    c.surface = Surface::sphere();
  } else if (kind == "torus") {
    const cplx tau = as_complex(require(sj, "tau", "surface"), "surface.tau");
    try {
      c.surface = Surface::flat_torus(tau);
    } catch (const VortexError& e) {
      throw ConfigError("surface.tau", e.what());
    }
  } else {
    throw ConfigError("surface.kind", "expected \"sphere\" or \"torus\"");
  }

  const json& vj = require(j, "vortices", "");
  if (!vj.is_array()) throw ConfigError("vortices", "expected an array");
  for (std::size_t i = 0; i < vj.size(); ++i) {
    const std::string w = "vortices[" + std::to_string(i) + "]";
    reject_unknown(vj[i], w, {"chart", "coord", "strength"});
    SurfacePoint p;
    p.chart = vj[i].contains("chart") ? static_cast<int>(as_integer(vj[i]["chart"], w + ".chart")) : 0;
    p.coord = as_complex(require(vj[i], "coord", w), w + ".coord");
    try {
      validate(c.surface, p);
    } catch (const VortexError& e) {
      throw ConfigError(w, e.what());
    }
    c.state.positions.push_back(p);
    c.state.strengths.push_back(as_number(require(vj[i], "strength", w), w + ".strength"));
  }
  const auto g = static_cast<std::size_t>(c.surface.genus());
  c.state.base_a.assign(g, 0.0);
  c.state.base_b.assign(g, 0.0);
  if (j.contains("base_circulations")) {
    const json& bj = j["base_circulations"];
    reject_unknown(bj, "base_circulations", {"a", "b"});
    optional_field(bj, "a", "base_circulations", c.state.base_a, as_reals);
    optional_field(bj, "b", "base_circulations", c.state.base_b, as_reals);
    if (c.state.base_a.size() != g) throw ConfigError("base_circulations.a", "length must equal the genus");
    if (c.state.base_b.size() != g) throw ConfigError("base_circulations.b", "length must equal the genus");
  }
  c.state.windings.assign(c.state.size(), LatticeShift{});

  if (j.contains("integrator")) {
    const json& ij = j["integrator"];
    const std::string w = "integrator";
    reject_unknown(ij, w, {"method", "dt", "steps", "record_every", "handover_radius", "collision_threshold", "rtol",
                           "atol", "max_consecutive_rejections"});
    if (ij.contains("method")) {
      if (ij["method"] == "rk4") c.integrator.method = Method::RK4;
      else if (ij["method"] == "rk45") c.integrator.method = Method::RK45;
      else throw ConfigError("integrator.method", "expected \"rk4\" or \"rk45\"");
    }
    optional_field(ij, "dt", w, c.integrator.dt, as_number);
    optional_field(ij, "steps", w, c.integrator.steps, as_integer);
    optional_field(ij, "record_every", w, c.integrator.record_every, as_integer);
    optional_field(ij, "handover_radius", w, c.integrator.handover_radius, as_number);
    optional_field(ij, "collision_threshold", w, c.collision_threshold, as_number);
    optional_field(ij, "rtol", w, c.integrator.rtol, as_number);
    optional_field(ij, "atol", w, c.integrator.atol, as_number);
    long rej = c.integrator.max_consecutive_rejections;
    optional_field(ij, "max_consecutive_rejections", w, rej, as_integer);
    c.integrator.max_consecutive_rejections = static_cast<int>(rej);
    if (!(c.integrator.dt > 0.0)) throw ConfigError("integrator.dt", "must be positive");
    if (c.integrator.steps < 0) throw ConfigError("integrator.steps", "must be non-negative");
    if (c.integrator.record_every < 1) throw ConfigError("integrator.record_every", "must be at least 1");
    if (!(c.integrator.handover_radius >= 1.0)) throw ConfigError("integrator.handover_radius", "must be at least 1");
    if (!(c.collision_threshold > 0.0)) throw ConfigError("integrator.collision_threshold", "must be positive");
  }

  if (j.contains("output")) {
    const json& oj = j["output"];
    reject_unknown(oj, "output", {"trajectory", "diagnostics", "kelvin_points"});
    auto str = [](const json& v, const std::string& f) {
      if (!v.is_string()) throw ConfigError(f, "expected a string");
      return v.get<std::string>();
    };
    optional_field(oj, "trajectory", "output", c.output.trajectory, str);
    optional_field(oj, "diagnostics", "output", c.output.diagnostics, str);
    long kp = c.integrator.kelvin_points;
    optional_field(oj, "kelvin_points", "output", kp, as_integer);
    if (kp < 0) throw ConfigError("output.kelvin_points", "must be non-negative");
    c.integrator.kelvin_points = static_cast<int>(kp);
  }

  if (j.contains("tolerances")) {
    const json& tj = j["tolerances"];
    reject_unknown(tj, "tolerances", {"energy_drift", "kelvin_drift", "velocity_residual"});
    optional_field(tj, "energy_drift", "tolerances", c.tolerances.energy_drift, as_number);
    optional_field(tj, "kelvin_drift", "tolerances", c.tolerances.kelvin_drift, as_number);
    optional_field(tj, "velocity_residual", "tolerances", c.tolerances.velocity_residual, as_number);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }

  try {
    validate_state(c.surface, c.state, c.collision_threshold);
  } catch (const StrengthError& e) {
    throw ConfigError("vortices", e.what());
  } catch (const VortexError& e) {
    throw ConfigError("vortices", e.what());
  }
  return c;
}

inline ScenarioConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", e.what(), detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  return config_from_json(j);
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline nlohmann::json config_to_json(const ScenarioConfig& c) {
  using detail::complex_json;
  nlohmann::json j;
  j["name"] = c.name;
  if (c.surface.is_sphere()) j["surface"] = {{"kind", "sphere"}};
  else j["surface"] = {{"kind", "torus"}, {"tau", complex_json(c.surface.tau())}};
  j["vortices"] = nlohmann::json::array();
  for (std::size_t i = 0; i < c.state.size(); ++i)
    j["vortices"].push_back({{"chart", c.state.positions[i].chart},
                             {"coord", complex_json(c.state.positions[i].coord)},
                             {"strength", c.state.strengths[i]}});
  j["base_circulations"] = {{"a", c.state.base_a}, {"b", c.state.base_b}};
  const auto& o = c.integrator;
  j["integrator"] = {{"method", to_string(o.method)},
                     {"dt", o.dt},
                     {"steps", o.steps},
                     {"record_every", o.record_every},
                     {"handover_radius", o.handover_radius},
                     {"collision_threshold", c.collision_threshold},
                     {"rtol", o.rtol},
                     {"atol", o.atol},
                     {"max_consecutive_rejections", o.max_consecutive_rejections}};
  j["output"] = {{"trajectory", c.output.trajectory}, {"diagnostics", c.output.diagnostics}, {"kelvin_points", o.kelvin_points}};
  j["tolerances"] = {{"energy_drift", c.tolerances.energy_drift},
                     {"kelvin_drift", c.tolerances.kelvin_drift},
                     {"velocity_residual", c.tolerances.velocity_residual}};
  j["seed"] = c.seed;
  return j;
}

inline std::string dump_config(const ScenarioConfig& c) { return config_to_json(c).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Output

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_header(const ScenarioConfig& c) {
  std::string h = "t";
  for (std::size_t k = 1; k <= c.state.size(); ++k) {
    const std::string n = std::to_string(k);
    h += ",z" + n + "_re,z" + n + "_im,chart" + n;
  }
  h += ",H";
  for (int k = 1; k <= c.surface.genus(); ++k) h += ",a_" + std::to_string(k);
  for (int k = 1; k <= c.surface.genus(); ++k) h += ",b_" + std::to_string(k);
  return h + ",min_sep";
}

inline std::string csv_row(const TrajectoryRecord& r) {
  std::string s = format_double(r.time);
  for (const auto& p : r.positions)
    s += "," + format_double(p.coord.real()) + "," + format_double(p.coord.imag()) + "," + std::to_string(p.chart);
  s += "," + format_double(r.hamiltonian);
  for (double a : r.circ_a) s += "," + format_double(a);
  for (double b : r.circ_b) s += "," + format_double(b);
  return s + "," + format_double(r.min_separation);
}

struct RunSummary {
  int exit_code = 0;  // 0 clean, 2 collision
  long records = 0;
  double final_time = 0.0;
  double energy_drift = 0.0;  // max |H - H0| / |H0|
  double kelvin_drift = 0.0;  // max |a_rec - a|, |b_rec - b|
  long step_rejections = 0;
  std::string message;
  std::filesystem::path trajectory;
  std::filesystem::path diagnostics;
};

/// Integrate a scenario and write its trajectory and diagnostics under out_dir.
inline RunSummary run_scenario(const ScenarioConfig& c, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunSummary sum;
  sum.trajectory = out_dir / c.trajectory_file();
  sum.diagnostics = out_dir / c.diagnostics_file();
  std::ofstream csv(sum.trajectory, std::ios::binary);
  std::ofstream diag(sum.diagnostics, std::ios::binary);
  if (!csv || !diag) throw VortexError("cannot open output files in " + out_dir.string());
  csv << csv_header(c) << '\n';

  const VortexModel model(c.surface, c.collision_threshold);
  double h0 = 0.0;
  auto sink = [&](const TrajectoryRecord& r) {
    if (sum.records == 0) h0 = r.hamiltonian;
    ++sum.records;
    sum.final_time = r.time;
    sum.step_rejections = r.step_rejections;
    const double drift = std::abs(r.hamiltonian - h0) / std::max(std::abs(h0), 1e-300);
    double kelvin = 0.0;
    for (std::size_t k = 0; k < r.circ_a.size(); ++k)
      kelvin = std::max({kelvin, std::abs(r.circ_a[k] - c.state.base_a[k]), std::abs(r.circ_b[k] - c.state.base_b[k])});
    sum.energy_drift = std::max(sum.energy_drift, drift);
    sum.kelvin_drift = std::max(sum.kelvin_drift, kelvin);
    csv << csv_row(r) << '\n';
    nlohmann::json d = {{"event", "record"},
                        {"t", r.time},
                        {"energy_drift", drift},
                        {"kelvin_drift", kelvin},
                        {"step_rejections", r.step_rejections},
                        {"min_sep", r.min_separation}};
    diag << d.dump() << '\n';
  };
  try {
    integrate_streaming(model, c.state, c.integrator, sink);
    sum.message = "completed";
  } catch (const CollisionError& e) {
    sum.exit_code = 2;
    sum.message = e.what();
    diag << nlohmann::json({{"event", "collision"}, {"t_last_record", sum.final_time}, {"separation", e.separation()},
                            {"message", e.what()}}).dump()
         << '\n';
  }
  diag << nlohmann::json({{"event", "summary"},
                          {"name", c.name},
                          {"records", sum.records},
                          {"final_time", sum.final_time},
                          {"energy_drift", sum.energy_drift},
                          {"kelvin_drift", sum.kelvin_drift},
                          {"step_rejections", sum.step_rejections},
                          {"exit_code", sum.exit_code}}).dump()
       << '\n';
  return sum;
}

}  // namespace vortex

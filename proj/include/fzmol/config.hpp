#pragma once

// YAML run configuration. Needs yaml-cpp (target fzmol::config).
//
//   profile:
//     L: pi              # number, "pi", "2*pi", "pi/2"
//     surface: projective # or sphere
//     f: [[1, 0.4], [3, 0.2]]
//     V: [[0, 0.45], [1, 0.45]]
//   energy:
//     h: 1.0             # or sweep: {min: 0.1, max: 2.0, samples: 40}
//   tolerances: {tol_grad: 1e-10, tol_hess: 1e-8, tol_value: 1e-9, grid_n: 4096}
//   outputs: {report: out.txt, graph: out.dot, json: out.json, oracle: true}

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include "fzmol/effective.hpp"
#include "fzmol/error.hpp"
#include "fzmol/profile.hpp"

namespace fzmol {

struct EnergySweep {
  double h_min = 0.0;
  double h_max = 0.0;
  int samples = 1;
};

struct OutputConfig {
  std::string report;  // empty: stdout
  std::string graph;
  std::string json;
  bool oracle = true;
};

struct RunConfig {
  Profile profile;
  std::optional<double> h;
  std::optional<EnergySweep> sweep;
  Tolerances tol;
  OutputConfig outputs;
};

namespace config_detail {

inline std::string where(const std::string& source, const YAML::Node& n, const std::string& field) {
  const auto m = n.Mark();
  std::string s = source;
  if (m.line >= 0) s += ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
  return s + ": field '" + field + "'";
}

[[noreturn]] inline void fail(const std::string& source, const YAML::Node& n, const std::string& field,
                              const std::string& what) {
  throw Error(ErrorCode::ConfigError, where(source, n, field) + ": " + what);
}

inline double number(const std::string& src, const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail(src, n, field, "expected a number");
  try {
    const double x = n.as<double>();
    if (!std::isfinite(x)) fail(src, n, field, "must be finite");
    return x;
  } catch (const YAML::BadConversion&) {
    fail(src, n, field, "expected a number, got '" + n.Scalar() + "'");
  }
}

inline int integer(const std::string& src, const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail(src, n, field, "expected an integer");
  try {
    return n.as<int>();
  } catch (const YAML::BadConversion&) {
    fail(src, n, field, "expected an integer, got '" + n.Scalar() + "'");
  }
}

// "pi", "2*pi", "2pi", "pi/3", "2*pi/3" or a plain number.
inline double half_period(const std::string& src, const YAML::Node& n) {
  if (!n.IsScalar()) fail(src, n, "profile.L", "expected a number or a multiple of pi");
  const std::string s = n.Scalar();
  static const std::regex re(R"(^\s*(?:([0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*([0-9.eE+-]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, re)) {
    try {
      double x = std::numbers::pi;
      if (m[1].matched) x *= std::stod(m[1].str());
      if (m[2].matched) x /= std::stod(m[2].str());
      return x;
    } catch (const std::exception&) {
      fail(src, n, "profile.L", "cannot read '" + s + "'");
    }
  }
  return number(src, n, "profile.L");
}

inline std::vector<Harmonic> harmonics(const std::string& src, const YAML::Node& n,
                                       const std::string& field) {
  std::vector<Harmonic> out;
  if (!n) return out;
  if (!n.IsSequence()) fail(src, n, field, "expected a list of [j, amplitude] pairs");
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto item = n[i];
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!item.IsSequence() || item.size() != 2) fail(src, item, f, "expected [j, amplitude]");
    out.push_back({integer(src, item[0], f + ".j"), number(src, item[1], f + ".amplitude")});
  }
  return out;
}

inline void check_keys(const std::string& src, const YAML::Node& n, const std::string& field,
                       std::initializer_list<const char*> allowed) {
  if (!n.IsMap()) fail(src, n, field, "expected a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(src, kv.first, field.empty() ? key : field + "." + key, "unknown key");
  }
}

}  // namespace config_detail

inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  using namespace config_detail;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::ConfigError, source + ":" + std::to_string(e.mark.line + 1) + ":" +
                                            std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw Error(ErrorCode::ConfigError, source + ": top level must be a mapping");
  check_keys(source, root, "", {"profile", "energy", "tolerances", "outputs"});

  RunConfig cfg;
  const auto prof = root["profile"];
  if (!prof) throw Error(ErrorCode::ConfigError, source + ": missing 'profile'");
  check_keys(source, prof, "profile", {"L", "surface", "f", "V"});
  if (prof["L"]) cfg.profile.L = half_period(source, prof["L"]);
  if (!(cfg.profile.L > 0.0)) fail(source, prof["L"], "profile.L", "must be positive");
  if (const auto s = prof["surface"]) {
    const std::string v = s.IsScalar() ? s.Scalar() : "";
    if (v == "sphere" || v == "Sphere") cfg.profile.surface = Surface::Sphere;
    else if (v == "projective" || v == "ProjectivePlane" || v == "rp2") cfg.profile.surface = Surface::ProjectivePlane;
    else fail(source, s, "profile.surface", "expected 'sphere' or 'projective'");
  }
  if (!prof["f"]) fail(source, prof, "profile.f", "missing");
  cfg.profile.f_coeffs = harmonics(source, prof["f"], "profile.f");
  cfg.profile.v_coeffs = harmonics(source, prof["V"], "profile.V");
  for (std::size_t i = 0; i < cfg.profile.f_coeffs.size(); ++i)
    if (cfg.profile.f_coeffs[i].j <= 0)
      fail(source, prof["f"][i], "profile.f[" + std::to_string(i) + "].j", "must be a positive odd integer");
  for (std::size_t i = 0; i < cfg.profile.v_coeffs.size(); ++i)
    if (cfg.profile.v_coeffs[i].j < 0)
      fail(source, prof["V"][i], "profile.V[" + std::to_string(i) + "].j", "must be nonnegative");

  if (const auto en = root["energy"]) {
    check_keys(source, en, "energy", {"h", "sweep"});
    if (en["h"] && en["sweep"]) fail(source, en, "energy", "give either h or sweep, not both");
    if (en["h"]) cfg.h = number(source, en["h"], "energy.h");
    if (const auto sw = en["sweep"]) {
      check_keys(source, sw, "energy.sweep", {"min", "max", "samples"});
      EnergySweep s;
      for (const char* k : {"min", "max", "samples"})
        if (!sw[k]) fail(source, sw, std::string("energy.sweep.") + k, "missing");
      s.h_min = number(source, sw["min"], "energy.sweep.min");
      s.h_max = number(source, sw["max"], "energy.sweep.max");
      s.samples = integer(source, sw["samples"], "energy.sweep.samples");
      if (s.samples < 1) fail(source, sw["samples"], "energy.sweep.samples", "must be at least 1");
      if (s.h_max < s.h_min) fail(source, sw["max"], "energy.sweep.max", "must not be below min");
      cfg.sweep = s;
    }
  }

  if (const auto t = root["tolerances"]) {
    check_keys(source, t, "tolerances", {"tol_grad", "tol_hess", "tol_value", "grid_n"});
    auto positive = [&](const char* key, double& dst) {
      if (!t[key]) return;
      dst = number(source, t[key], std::string("tolerances.") + key);
      if (!(dst > 0.0)) fail(source, t[key], std::string("tolerances.") + key, "must be positive");
    };
    positive("tol_grad", cfg.tol.tol_grad);
    positive("tol_hess", cfg.tol.tol_hess);
    positive("tol_value", cfg.tol.tol_value);
    if (t["grid_n"]) {
      cfg.tol.grid_n = integer(source, t["grid_n"], "tolerances.grid_n");
      if (cfg.tol.grid_n < 16) fail(source, t["grid_n"], "tolerances.grid_n", "must be at least 16");
    }
  }

  if (const auto o = root["outputs"]) {
    check_keys(source, o, "outputs", {"report", "graph", "json", "oracle"});
    auto path = [&](const char* key, std::string& dst) {
      if (!o[key]) return;
      if (!o[key].IsScalar()) fail(source, o[key], std::string("outputs.") + key, "expected a path");
      dst = o[key].Scalar();
    };
    path("report", cfg.outputs.report);
    path("graph", cfg.outputs.graph);
    path("json", cfg.outputs.json);
    if (o["oracle"]) {
      try {
        cfg.outputs.oracle = o["oracle"].as<bool>();
      } catch (const YAML::BadConversion&) {
        fail(source, o["oracle"], "outputs.oracle", "expected true or false");
      }
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

}  // namespace fzmol

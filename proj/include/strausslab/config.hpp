#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "strausslab/errors.hpp"
#include "strausslab/exponents.hpp"

namespace strausslab {

// Experiment description shared by all subcommands.  Parsed from a
// line-oriented `key = value` file with dotted keys; every key has a default,
// unknown keys are rejected.
struct ExperimentConfig {
  ModelParams model{};  // model.*; defaults n=1, mu1=2, mu2sq=0, p=2, eps=0.5, R=1

  // The default window stays clear of the default model's blow-up (t ~ 12),
  // so structural checks see a fully resolved solution out of the box.
  double grid_T_max = 8.0;        // grid.T_max
  int grid_nr = 800;              // grid.nr
  double grid_cfl = 0.5;          // grid.cfl
  double grid_snap_interval = 0;  // grid.snap_interval (0 = none)

  std::vector<double> sweep_eps;  // sweep.eps, explicit ladder
  double sweep_min = 0.0;         // sweep.min  } alternative: log-spaced ladder
  double sweep_max = 0.0;         // sweep.max  }
  int sweep_count = 0;            // sweep.count }

  std::string case_kind = "subcritical";  // case: subcritical|critical|ode-critical
  std::vector<std::string> checks;        // checks: subset of registered names; empty = all
  std::string output_dir = ".";           // output_dir
  unsigned long seed = 0;                 // seed (noise experiments only)

  double T0 = 5.0;    // T0: pivot time for the ledger blow-up bound
  double C1 = 0.7;    // C1: fitted lower-bound constant fed to the ledger
  int j_max = 30;     // j_max: ledger length
  double ode_C = 1.0;   // ode.C
  double ode_c0 = 1.0;  // ode.c0
};

// Verification checks cmd_verify knows how to run.
inline const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> names = {
      "exponents-consistency", "specfun-bessel",  "specfun-hypergeometric",
      "lambda-ode",            "phi-ode",         "adjoint-ode",
      "psi-bands",             "g-dynamics",      "key-inequality",
      "jbeta-lemma",           "priori-bound",    "fundamental-identity",
      "ledger-closed-forms",   "ledger-chain",    "gap-identity",
      "ode-floors",            "conjugate-exponent"};
  return names;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
  }
  if (pos != v.size())
    throw ConfigError("config key '" + key + "': trailing junk in '" + v + "'");
  return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  if (d != std::floor(d))
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

inline std::vector<std::string> split_ws(const std::string& v) {
  std::istringstream iss(v);
  std::vector<std::string> out;
  for (std::string tok; iss >> tok;) out.push_back(tok);
  return out;
}

}  // namespace detail

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  using detail::parse_double;
  using detail::parse_int;
  if (key == "model.n") cfg.model.n = parse_int(key, value);
  else if (key == "model.mu1") cfg.model.mu1 = parse_double(key, value);
  else if (key == "model.mu2sq") cfg.model.mu2sq = parse_double(key, value);
  else if (key == "model.p") cfg.model.p = parse_double(key, value);
  else if (key == "model.eps") cfg.model.eps = parse_double(key, value);
  else if (key == "model.R") cfg.model.R = parse_double(key, value);
  else if (key == "model.amp_f") cfg.model.profile.amp_f = parse_double(key, value);
  else if (key == "model.amp_g") cfg.model.profile.amp_g = parse_double(key, value);
  else if (key == "model.profile") {
    if (value == "bump") cfg.model.profile.kind = DataProfile::Kind::bump;
    else if (value == "constant") cfg.model.profile.kind = DataProfile::Kind::constant;
    else throw ConfigError("config key 'model.profile': expected bump|constant, got '" +
                           value + "'");
  } else if (key == "grid.T_max") cfg.grid_T_max = parse_double(key, value);
  else if (key == "grid.nr") cfg.grid_nr = parse_int(key, value);
  else if (key == "grid.cfl") cfg.grid_cfl = parse_double(key, value);
  else if (key == "grid.snap_interval") cfg.grid_snap_interval = parse_double(key, value);
  else if (key == "sweep.eps") {
    cfg.sweep_eps.clear();
    for (const auto& tok : detail::split_ws(value))
      cfg.sweep_eps.push_back(parse_double(key, tok));
    if (cfg.sweep_eps.empty())
      throw ConfigError("config key 'sweep.eps': empty ladder");
  } else if (key == "sweep.min") cfg.sweep_min = parse_double(key, value);
  else if (key == "sweep.max") cfg.sweep_max = parse_double(key, value);
  else if (key == "sweep.count") cfg.sweep_count = parse_int(key, value);
  else if (key == "case") {
    if (value != "subcritical" && value != "critical" && value != "ode-critical")
      throw ConfigError(
          "config key 'case': expected subcritical|critical|ode-critical, got '" + value +
          "'");
    cfg.case_kind = value;
  } else if (key == "checks") {
    cfg.checks = detail::split_ws(value);
    const auto& reg = registered_checks();
    for (const auto& c : cfg.checks)
      if (std::find(reg.begin(), reg.end(), c) == reg.end())
        throw ConfigError("config key 'checks': unknown check '" + c + "'");
  } else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "seed") cfg.seed = static_cast<unsigned long>(parse_int(key, value));
  else if (key == "T0") cfg.T0 = parse_double(key, value);
  else if (key == "C1") cfg.C1 = parse_double(key, value);
  else if (key == "j_max") cfg.j_max = parse_int(key, value);
  else if (key == "ode.C") cfg.ode_C = parse_double(key, value);
  else if (key == "ode.c0") cfg.ode_c0 = parse_double(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream iss(text);
  return parse_config(iss);
}

// The effective epsilon ladder: the explicit list wins; otherwise a log-spaced
// ladder from sweep.min/max/count.  Values must be positive and distinct.
inline std::vector<double> resolved_sweep(const ExperimentConfig& cfg) {
  std::vector<double> eps = cfg.sweep_eps;
  if (eps.empty() && cfg.sweep_count > 0) {
    if (!(cfg.sweep_min > 0.0) || !(cfg.sweep_max > cfg.sweep_min))
      throw ConfigError("sweep.min/sweep.max: need 0 < min < max for a log-spaced ladder");
    if (cfg.sweep_count == 1) {
      eps.push_back(cfg.sweep_min);
    } else {
      const double la = std::log(cfg.sweep_min), lb = std::log(cfg.sweep_max);
      for (int i = 0; i < cfg.sweep_count; ++i)
        eps.push_back(std::exp(lb + (la - lb) * i / (cfg.sweep_count - 1)));
    }
  }
  if (eps.empty()) throw ConfigError("sweep: no epsilon ladder configured");
  for (double e : eps)
    if (!(e > 0.0)) throw ConfigError("sweep: epsilon values must be positive");
  auto sorted = eps;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("sweep: epsilon values must be distinct");
  return eps;
}

}  // namespace strausslab

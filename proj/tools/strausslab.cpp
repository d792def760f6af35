// strausslab — command-line workbench around the headers: exponent reports,
// structural verification checks, radial solves, lifespan sweeps, the
// critical comparison ODE, and the iteration ledger.  All numerics live in
// include/strausslab; this file is orchestration, formatting, and exit codes.
//
// Exit codes: 0 success, 2 configuration error, 3 verification check failure,
// 4 runtime / accuracy error.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "strausslab/config.hpp"
#include "strausslab/errors.hpp"
#include "strausslab/exponents.hpp"
#include "strausslab/functionals.hpp"
#include "strausslab/iteration.hpp"
#include "strausslab/solver.hpp"
#include "strausslab/specfun.hpp"
#include "strausslab/testfuncs.hpp"

namespace sl = strausslab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ------------------------------------------------------------------ logging

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

Level g_level = Level::warn;

Level level_from_env() {
  const char* v = std::getenv("STRAUSSLAB_LOG");
  if (!v) return Level::warn;
  const std::string s(v);
  if (s == "debug") return Level::debug;
  if (s == "info") return Level::info;
  if (s == "warn") return Level::warn;
  if (s == "error") return Level::error;
  std::fprintf(stderr, "[strausslab] unknown STRAUSSLAB_LOG level '%s', using warn\n", v);
  return Level::warn;
}

void logmsg(Level lv, const std::string& msg) {
  if (static_cast<int>(lv) < static_cast<int>(g_level)) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::fprintf(stderr, "[strausslab][%s] %s\n", names[static_cast<int>(lv)], msg.c_str());
}

// --------------------------------------------------------------- formatting

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw sl::ConfigError("cannot write '" + p.string() + "'");
  f << body;
  if (!f) throw sl::ConfigError("write failed for '" + p.string() + "'");
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

fs::path ensure_outdir(const sl::ExperimentConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw sl::ConfigError("cannot create output_dir '" + cfg.output_dir + "': " + ec.message());
  return dir;
}

json model_to_json(const sl::ModelParams& mp) {
  return json{{"n", mp.n},          {"mu1", mp.mu1},
              {"mu2sq", mp.mu2sq},  {"p", mp.p},
              {"eps", mp.eps},      {"R", mp.R},
              {"amp_f", mp.profile.amp_f}, {"amp_g", mp.profile.amp_g},
              {"profile", mp.profile.kind == sl::DataProfile::Kind::bump ? "bump" : "constant"}};
}

// ----------------------------------------------------------- shared options

struct Common {
  std::string config_path;
  std::string out_dir;
  int workers = 0;  // 0 = auto
  bool json_out = false;
  bool use_pS = false;
  // model overrides (NaN / -1 = not given)
  int n = -1;
  double mu1 = std::numeric_limits<double>::quiet_NaN();
  double mu2sq = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double eps = std::numeric_limits<double>::quiet_NaN();
  double R = std::numeric_limits<double>::quiet_NaN();
};

void attach_common(CLI::App* sub, Common& c, bool with_workers) {
  sub->add_option("--config", c.config_path, "experiment config file (key = value lines)");
  sub->add_option("--out", c.out_dir, "output directory (overrides config output_dir)");
  sub->add_flag("--json", c.json_out, "print the machine-readable report to stdout");
  sub->add_flag("--pS", c.use_pS, "set p to the shifted Strauss exponent p_S(n + mu1)");
  if (with_workers)
    sub->add_option("--workers", c.workers, "worker threads for sweeps (0 = auto)")
        ->check(CLI::NonNegativeNumber);
}

void attach_model_overrides(CLI::App* sub, Common& c) {
  sub->add_option("--n", c.n, "space dimension");
  sub->add_option("--mu1", c.mu1, "damping coefficient mu1");
  sub->add_option("--mu2sq", c.mu2sq, "mass coefficient mu2^2");
  sub->add_option("--p", c.p, "nonlinearity power p");
  sub->add_option("--eps", c.eps, "data amplitude epsilon");
  sub->add_option("--R", c.R, "data support radius R");
}

sl::ExperimentConfig load_config(const Common& c) {
  sl::ExperimentConfig cfg;
  if (!c.config_path.empty()) {
    std::ifstream f(c.config_path);
    if (!f) throw sl::ConfigError("cannot open config file '" + c.config_path + "'");
    cfg = sl::parse_config(f);
    logmsg(Level::info, "loaded config " + c.config_path);
  }
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (c.n >= 0) cfg.model.n = c.n;
  if (!std::isnan(c.mu1)) cfg.model.mu1 = c.mu1;
  if (!std::isnan(c.mu2sq)) cfg.model.mu2sq = c.mu2sq;
  if (!std::isnan(c.p)) cfg.model.p = c.p;
  if (!std::isnan(c.eps)) cfg.model.eps = c.eps;
  if (!std::isnan(c.R)) cfg.model.R = c.R;
  if (c.use_pS) {
    cfg.model.p = sl::exponents::strauss(cfg.model.n + cfg.model.mu1);
    logmsg(Level::info, "p set to p_S(" + num(cfg.model.n + cfg.model.mu1) + ") = " + num(cfg.model.p));
  }
  try {
    cfg.model.validate();
  } catch (const sl::DomainError& e) {
    throw sl::ConfigError(std::string("invalid model: ") + e.what());
  }
  return cfg;
}

int pick_workers(int requested, std::size_t items) {
  int w = requested > 0 ? requested
                        : std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min<int>(w, static_cast<int>(items)));
}

// Run fn(i) for i in [0, count) on `workers` threads; items claim indices
// from a shared counter, results land in caller-owned slots, so output order
// never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
    });
  for (auto& t : pool) t.join();
}

// ------------------------------------------------------------- exit mapping

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const sl::ConfigError& e) {
    std::fprintf(stderr, "strausslab: config error: %s\n", e.what());
    return 2;
  } catch (const sl::OverflowGuard& e) {
    std::fprintf(stderr, "strausslab: config error: %s\n", e.what());
    return 2;
  } catch (const sl::NoBlowUp& e) {
    std::fprintf(stderr, "strausslab: %s\n", e.what());
    return 4;
  } catch (const sl::AccuracyError& e) {
    std::fprintf(stderr, "strausslab: accuracy error: %s\n", e.what());
    return 4;
  } catch (const sl::DomainError& e) {
    std::fprintf(stderr, "strausslab: config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "strausslab: error: %s\n", e.what());
    return 4;
  }
}

// ----------------------------------------------------------- cmd: exponents

json exponent_report_json(const sl::ModelParams& mp) {
  namespace ex = sl::exponents;
  const ex::ExponentReport rep = ex::classify(mp);
  json j;
  j["model"] = model_to_json(mp);
  j["delta"] = rep.delta;
  j["r1"] = rep.r1;
  j["r2"] = rep.r2;
  j["gamma"] = rep.gamma;
  j["p_strauss_shifted"] = rep.pS;  // p_S(n + mu1); inf serializes as null
  j["p_fujita"] = ex::fujita(static_cast<double>(mp.n));
  j["p_fujita_shifted"] = rep.pF_shifted;
  j["mu_star"] = ex::mu_star(mp.n);
  j["beta_p"] = ex::beta_q(mp.n, mp.mu1, mp.p);
  j["regime"] = ex::to_string(rep.regime);
  j["flags"] = json{{"thm_subcritical_ok", rep.flags.thm_subcritical_ok},
                    {"thm_critical_ok", rep.flags.thm_critical_ok},
                    {"beta_p_admissible", rep.flags.beta_p_admissible},
                    {"beta_p_geq", rep.flags.beta_p_geq}};
  if (rep.flags.thm_subcritical_ok)
    j["lifespan_exponent"] = -2.0 * mp.p * (mp.p - 1.0) / rep.gamma;
  if (rep.flags.thm_critical_ok)
    j["log_lifespan_exponent"] = -mp.p * (mp.p - 1.0);
  return j;
}

int cmd_exponents(const sl::ExperimentConfig& cfg, const Common& c) {
  const json j = exponent_report_json(cfg.model);
  const fs::path dir = ensure_outdir(cfg);
  write_json(dir / "exponents.json", j);

  if (c.json_out) {
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }
  const sl::ModelParams& mp = cfg.model;
  std::printf("model:              n=%d  mu1=%s  mu2^2=%s  p=%s  eps=%s  R=%s\n", mp.n,
              num(mp.mu1).c_str(), num(mp.mu2sq).c_str(), num(mp.p).c_str(),
              num(mp.eps).c_str(), num(mp.R).c_str());
  std::printf("delta:              %s\n", num(j["delta"].get<double>()).c_str());
  std::printf("roots r1, r2:       %s, %s\n", num(j["r1"].get<double>()).c_str(),
              num(j["r2"].get<double>()).c_str());
  std::printf("gamma(p, n+mu1):    %s\n", num(j["gamma"].get<double>()).c_str());
  std::printf("p_S(n+mu1):         %s\n", num(j["p_strauss_shifted"].is_null()
                                                  ? std::numeric_limits<double>::infinity()
                                                  : j["p_strauss_shifted"].get<double>())
                                              .c_str());
  std::printf("p_F(n):             %s\n", num(j["p_fujita"].get<double>()).c_str());
  std::printf("p_F(n+r1):          %s\n", j["p_fujita_shifted"].is_null()
                                              ? "nan"
                                              : num(j["p_fujita_shifted"].get<double>()).c_str());
  std::printf("mu*(n):             %s\n", num(j["mu_star"].get<double>()).c_str());
  std::printf("beta_p:             %s\n", num(j["beta_p"].get<double>()).c_str());
  std::printf("regime:             %s\n", j["regime"].get<std::string>().c_str());
  const json& fl = j["flags"];
  std::printf("hypotheses:         subcritical=%s critical=%s beta_p-admissible=%s beta_p>=bound=%s\n",
              fl["thm_subcritical_ok"].get<bool>() ? "yes" : "no",
              fl["thm_critical_ok"].get<bool>() ? "yes" : "no",
              fl["beta_p_admissible"].get<bool>() ? "yes" : "no",
              fl["beta_p_geq"].get<bool>() ? "yes" : "no");
  if (j.contains("lifespan_exponent"))
    std::printf("lifespan:           T(eps) <= C eps^(%s)\n",
                num(j["lifespan_exponent"].get<double>()).c_str());
  if (j.contains("log_lifespan_exponent"))
    std::printf("lifespan:           log T(eps) <= C eps^(%s)\n",
                num(j["log_lifespan_exponent"].get<double>()).c_str());
  return 0;
}

// -------------------------------------------------------------- cmd: verify

struct CheckOutcome {
  bool pass = false;
  double metric = 0.0;
  double tol = 0.0;
  long samples = 0;
  std::string note;
  std::string error;  // exception text when the check could not run
};

// One radial solve on the configured model (window kept clear of blow-up by
// the default config) shared by the functional checks.
struct ModelRun {
  sl::ModelParams mp;
  sl::RadialGrid grid;
  sl::SolveTrace trace;
  sl::SubcriticalTestFn sub;
  sl::FunctionalSeries fs;
};

// Compact-support reference configuration for the checks that require data
// strictly inside the unit light cone and an admissible weight exponent
// (the default model has R = 1 and an empty admissible window).
struct WindowRun {
  sl::ModelParams mp;
  sl::RadialGrid grid;
  sl::SolveTrace trace;
  sl::CriticalTestFn tf;
  sl::FunctionalSeries fs;
};

struct VerifyCtx {
  const sl::ExperimentConfig& cfg;
  std::optional<ModelRun> model_run;
  std::optional<WindowRun> window_run;

  ModelRun& model() {
    if (!model_run) {
      sl::ModelParams mp = cfg.model;
      sl::SolverConfig sc;
      sc.T_max = cfg.grid_T_max;
      sc.nr = cfg.grid_nr;
      sc.cfl = cfg.grid_cfl;
      sl::RadialGrid g = sl::RadialGrid::for_horizon(mp.R, sc.T_max, sc.nr);
      sc.snap_interval = g.dr;
      logmsg(Level::info, "verify: solving configured model (T_max=" + num(sc.T_max) +
                              ", nr=" + std::to_string(sc.nr) + ")");
      sl::SolveTrace tr = sl::solve_until_blowup(mp, g, sc);
      sl::SubcriticalTestFn sub(mp);
      sl::FunctionalSeries fs = sl::evaluate_functionals(tr, g, mp, sub);
      model_run.emplace(ModelRun{mp, g, std::move(tr), std::move(sub), std::move(fs)});
    }
    return *model_run;
  }

  WindowRun& window() {
    if (!window_run) {
      sl::ModelParams mp;
      mp.n = 3;
      mp.mu1 = 2.0;
      mp.mu2sq = 0.0;
      mp.R = 0.5;
      mp.eps = 0.5;
      mp.p = sl::exponents::strauss(5.0);
      sl::SolverConfig sc;
      sc.T_max = 2.0;
      sc.nr = 400;
      sl::RadialGrid g = sl::RadialGrid::for_horizon(mp.R, sc.T_max, sc.nr);
      sc.snap_interval = g.dr;
      logmsg(Level::info, "verify: solving compact-support reference model");
      sl::SolveTrace tr = sl::solve_until_blowup(mp, g, sc);
      sl::CriticalTestFn tf(mp.n, mp.mu1, mp.mu2sq, 0.5);
      sl::SubcriticalTestFn sub(mp);
      sl::FunctionalSeries fs = sl::evaluate_functionals(tr, g, mp, sub, {tf});
      window_run.emplace(WindowRun{mp, g, std::move(tr), std::move(tf), std::move(fs)});
    }
    return *window_run;
  }
};

CheckOutcome check_exponents_consistency(VerifyCtx& ctx) {
  namespace ex = sl::exponents;
  CheckOutcome out;
  out.tol = 1e-12;
  double worst = 0.0;
  long samples = 0;
  for (double r = 1.5; r <= 10.0 + 1e-9; r += 0.5) {
    worst = std::max(worst, std::abs(ex::gamma(ex::strauss(r), r)));
    ++samples;
  }
  for (int n = 1; n <= 6; ++n) {
    const double d = std::abs(ex::fujita(static_cast<double>(n)) - ex::strauss(n + ex::mu_star(n)));
    worst = std::max(worst, d);
    ++samples;
  }
  // the configured model must classify cleanly and coherently
  const sl::ModelParams& mp = ctx.cfg.model;
  const ex::Roots roots = ex::characteristic_roots(mp.mu1, mp.mu2sq);  // throws if delta < 0
  const ex::ExponentReport rep = ex::classify(mp);
  bool coherent = rep.r2 >= rep.r1 && rep.r1 == roots.r1 && rep.r2 == roots.r2;
  if (rep.flags.thm_subcritical_ok) coherent = coherent && rep.gamma > 0.0;
  out.metric = worst;
  out.samples = samples;
  out.pass = worst <= out.tol && coherent;
  out.note = "gamma(p_S(r), r) = 0 and p_F(n) = p_S(n + mu*(n)); model classifies coherently";
  return out;
}

CheckOutcome check_specfun_bessel(VerifyCtx&) {
  namespace sf = sl::specfun;
  CheckOutcome out;
  out.tol = 1.0;  // tolerance-scaled: closed form at 1e-8, derivative at 1e-6
  double worst = 0.0;
  long samples = 0;
  for (double t = 0.5; t <= 20.0 + 1e-9; t += 0.25) {
    const double ref = std::sqrt(M_PI / (2.0 * t)) * std::exp(-t);
    worst = std::max(worst, std::abs(sf::bessel_k(0.5, t) - ref) / ref / 1e-8);
    ++samples;
  }
  for (double nu : {0.5, 1.5}) {
    for (double t : {0.75, 1.5, 3.0, 6.0, 12.0}) {
      const double d = sf::bessel_k_prime(nu, t);
      const double fd = sl::quad::derivative1_richardson([nu](double s) { return sf::bessel_k(nu, s); },
                                                         t, 1e-2 * t);
      worst = std::max(worst, std::abs(d - fd) / std::abs(d) / 1e-6);
      ++samples;
    }
  }
  out.metric = worst;
  out.samples = samples;
  out.pass = worst <= out.tol;
  out.note = "K_{1/2} closed form and K' identity, defects scaled by their tolerances";
  return out;
}

CheckOutcome check_specfun_hypergeometric(VerifyCtx&) {
  namespace sf = sl::specfun;
  CheckOutcome out;
  out.tol = 1e-10;
  double worst = std::abs(sf::hyp2f1(1.0, 1.0, 2.0, 0.5) - (-std::log(0.5) / 0.5));
  long samples = 1;
  for (double z : {0.1, 0.3, 0.7}) {
    worst = std::max(worst, std::abs(sf::hyp2f1(1.0, 1.0, 2.0, z) - (-std::log1p(-z) / z)));
    ++samples;
  }
  worst = std::max(worst, std::abs(sf::hyp2f1(0.3, 1.7, 2.4, 0.0) - 1.0));
  ++samples;
  out.metric = worst;
  out.samples = samples;
  out.pass = worst <= out.tol;
  out.note = "F(1,1;2;z) = -log(1-z)/z and F(a,b;c;0) = 1";
  return out;
}

CheckOutcome check_lambda_ode(VerifyCtx&) {
  CheckOutcome out;
  out.tol = 1e-6;
  const std::array<std::pair<double, double>, 4> pairs{
      {{0.0, 0.0}, {2.0, 0.0}, {3.0, 1.0}, {1.0, 0.0}}};
  double worst = 0.0;
  long samples = 0;
  for (const auto& [mu1, mu2sq] : pairs) {
    sl::ModelParams mp;
    mp.mu1 = mu1;
    mp.mu2sq = mu2sq;
    const sl::SubcriticalTestFn sub(mp);
    for (double t = 0.0; t <= 10.0 + 1e-9; t += 0.5) {
      worst = std::max(worst, std::abs(sub.lambda_ode_residual(t)));
      ++samples;
    }
  }
  out.metric = worst;
  out.samples = samples;
  out.pass = worst <= out.tol;
  out.note = "time-weight ODE residual (Richardson-extrapolated) on t in [0, 10]";
  return out;
}

CheckOutcome check_phi_ode(VerifyCtx&) {
  CheckOutcome out;
  out.tol = 1e-6;
  double worst = 0.0;
  long samples = 0;
  for (int n = 1; n <= 3; ++n) {
    for (double r = 0.25; r <= 5.0 + 1e-9; r += 0.25) {
      worst = std::max(worst, std::abs(sl::phi_radial_laplace_residual(r, n)));
      ++samples;
    }
  }
  out.metric = worst;
  out.samples = samples;
  out.pass = worst <= out.tol;
  out.note = "radial profile solves Laplace phi = phi, n = 1..3";
  return out;
}

CheckOutcome check_adjoint_ode(VerifyCtx&) {
  CheckOutcome out;
  out.tol = 1e-5;
  const sl::CriticalTestFn tf = sl::CriticalTestFn::unchecked(3, 2.0, 0.0, 1.0);
  double worst = 0.0;
  long samples = 0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (double frac : {0.0, 0.3, 0.6, 0.9}) {
      worst = std::max(worst, std::abs(tf.adjoint_residual(t, frac * (1.0 + t))));
      ++samples;
    }
  }
  out.metric = worst;
  out.samples = samples;
  out.pass = worst <= out.tol;
  out.note = "adjoint-equation residual of the weight Phi at interior points";
  return out;
}

CheckOutcome check_psi_bands(VerifyCtx&) {
  CheckOutcome out;
  out.tol = 10.0;  // metric is the worst envelope ratio
  struct Cfg {
    int n;
    double mu1, mu2sq;
    std::array<double, 3> betas;
  };
  const std::array<Cfg, 3> cfgs{{{3, 2.0, 0.0, {0.3, 0.5, 0.8}},
                                 {2, 1.5, 0.05, {0.2, 0.4, 0.6}},
                                 {4, 1.0, 0.0, {1.2, 1.5, 1.8}}}};
  double worst_ratio = 0.0;
  bool bounds_ok = true;
  long samples = 0;
  for (const Cfg& c : cfgs) {
    for (double beta : c.betas) {
      const sl::CriticalTestFn tf(c.n, c.mu1, c.mu2sq, beta);
      const double cap = std::exp(std::lgamma(tf.hp.c) + std::lgamma(tf.hp.c - tf.hp.a - tf.hp.b) -
                                  std::lgamma(tf.hp.c - tf.hp.a) - std::lgamma(tf.hp.c - tf.hp.b));
      for (double z = 0.0; z <= 0.975 + 1e-9; z += 0.025) {
        const double v = tf.psi(z);
        bounds_ok = bounds_ok && v >= 1.0 - 1e-12 && v <= cap * (1.0 + 1e-8);
        ++samples;
      }
      const double vtop = tf.psi(0.9999);
      bounds_ok = bounds_ok && vtop >= 1.0 - 1e-12 && vtop <= cap * (1.0 + 1e-8);
      ++samples;

      const double s = beta - 0.5 * (c.n - c.mu1 - 1.0);
      double qlo = std::numeric_limits<double>::infinity(), qhi = 0.0;
      for (double z : {0.9, 0.93, 0.96, 0.99, 0.997, 0.9999}) {
        const double q = std::abs(tf.psi_prime(z)) * std::pow(1.0 - std::sqrt(z), s);
        qlo = std::min(qlo, q);
        qhi = std::max(qhi, q);
        ++samples;
      }
      worst_ratio = std::max(worst_ratio, qhi / qlo);
    }
  }
  out.metric = worst_ratio;
  out.samples = samples;
  out.pass = bounds_ok && worst_ratio < out.tol;
  out.note = "psi in [1, C'] and compensated |psi'| envelope ratio near z = 1";
  return out;
}

CheckOutcome check_g_dynamics(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 5e-3;
  ModelRun& run = ctx.model();
  const sl::ResidualSeries rs = sl::check_g_dynamics(run.fs, run.mp);
  out.metric = rs.rel_l2;
  out.samples = static_cast<long>(rs.times.size());
  out.pass = rs.rel_l2 < out.tol;
  out.note = "relative L2 residual of the averaged dynamics on the configured window";
  return out;
}

CheckOutcome check_key_inequality(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 0.0;
  ModelRun& run = ctx.model();
  const sl::InequalitySeries is = sl::check_key_inequality(run.fs, run.mp);
  out.metric = static_cast<double>(is.checked);
  out.samples = static_cast<long>(is.times.size());
  out.pass = is.all_ok && is.checked > 0;
  out.note = "memory-term lower bound holds at every non-degenerate sample";
  return out;
}

CheckOutcome check_jbeta(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 0.0;
  WindowRun& run = ctx.window();
  const sl::InequalitySeries is = sl::check_Jbeta_lemma(run.fs, 0);
  out.metric = static_cast<double>(is.checked);
  out.samples = static_cast<long>(is.times.size());
  out.pass = is.all_ok && is.checked > 0;
  out.note = "iterated-average bound on the reference configuration (beta = 0.5)";
  return out;
}

CheckOutcome check_priori(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 0.0;
  ModelRun& run = ctx.model();
  const sl::PrioriBoundResult pr = sl::check_priori_bound(run.fs, run.mp, run.sub, ctx.cfg.T0);
  out.metric = pr.C1_fit;
  out.samples = static_cast<long>(run.fs.times.size());
  out.pass = pr.ok && !pr.degenerate && pr.f_nonneg && pr.holder_ok;
  out.note = "averaged lower bound: F >= 0, Holder step, fitted C1 > 0 for t >= T0";
  return out;
}

CheckOutcome check_identity(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 1e-2;
  WindowRun& run = ctx.window();
  const sl::IdentityResidual id =
      sl::check_fundamental_identity(run.trace, run.grid, run.mp, run.tf);
  out.metric = id.max_residual;
  out.samples = static_cast<long>(id.times.size());
  out.pass = id.max_residual < out.tol && !id.residual.empty() && id.residual.front() < 1e-6;
  out.note = "weighted space-time identity on the reference configuration";
  return out;
}

sl::IterationLedger ledger_for(const sl::ExperimentConfig& cfg) {
  return sl::build_ledger(cfg.model, cfg.C1, std::min(cfg.j_max, 30));
}

CheckOutcome check_ledger_closed_forms(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 1e-10;
  const sl::IterationLedger led = ledger_for(ctx.cfg);
  double worst = 0.0;
  long samples = 0;
  for (std::size_t j = 1; j <= led.a.size(); ++j) {
    const sl::LedgerClosedForms cf = sl::closed_forms(led, static_cast<int>(j));
    worst = std::max(worst, std::abs(cf.a - led.a[j - 1]) / std::max(1.0, std::abs(led.a[j - 1])));
    worst = std::max(worst, std::abs(cf.b - led.b[j - 1]) / std::max(1.0, std::abs(led.b[j - 1])));
    worst = std::max(worst,
                     std::abs(cf.log_D - led.log_D[j - 1]) / std::max(1.0, std::abs(led.log_D[j - 1])));
    samples += 3;
  }
  out.metric = worst;
  out.samples = samples;
  out.pass = worst <= out.tol;
  out.note = "closed forms reproduce the exponent/amplitude recursion";
  return out;
}

CheckOutcome check_ledger_chain(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 0.0;  // metric is the minimum log-margin; must stay positive
  const sl::IterationLedger led = ledger_for(ctx.cfg);
  const double p = led.params.p;
  double min_margin = std::numeric_limits<double>::infinity();
  long samples = 0;
  for (std::size_t j = 1; j <= led.b.size(); ++j) {
    const double margin = 2.0 * (j * std::log(p) + std::log(led.beta)) -
                          std::log(led.r2 + p * led.b[j - 1] + 2.0) -
                          std::log(led.r2 + p * led.b[j - 1] + 3.0);
    min_margin = std::min(min_margin, margin);
    ++samples;
  }
  out.metric = min_margin;
  out.samples = samples;
  out.pass = min_margin > 0.0;
  out.note = "amplitude chain dominates the recursion denominators at every step";
  return out;
}

CheckOutcome check_gap_identity(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 1e-12;
  const sl::IterationLedger led = ledger_for(ctx.cfg);
  const sl::ModelParams& mp = ctx.cfg.model;
  const double g = sl::exponents::gamma(mp.p, mp.n + mp.mu1);
  out.metric = std::abs(led.beta - led.alpha - g / (2.0 * (mp.p - 1.0)));
  out.samples = 1;
  out.pass = out.metric <= out.tol;
  out.note = "beta - alpha equals gamma / (2(p-1))";
  return out;
}

CheckOutcome check_ode_floors(VerifyCtx& ctx) {
  CheckOutcome out;
  out.tol = 1e-12;  // metric is the worst relative floor violation
  const sl::ModelParams& mp = ctx.cfg.model;
  const sl::CriticalOdeRun run =
      sl::critical_ode_integrate(mp.p, ctx.cfg.ode_C, ctx.cfg.ode_c0, mp.eps);
  const double base = ctx.cfg.ode_c0 * std::pow(mp.eps, mp.p);
  double worst = 0.0;
  bool monotone = true;
  double prevJ = -std::numeric_limits<double>::infinity();
  for (const auto& s : run.trajectory) {
    const double floor = base * s[0];
    worst = std::max(worst, (floor - s[1]) / floor);
    monotone = monotone && s[1] > prevJ;
    prevJ = s[1];
  }
  out.metric = worst;
  out.samples = static_cast<long>(run.trajectory.size());
  out.pass = worst <= out.tol && monotone && !run.crossings.empty();
  out.note = "comparison-ODE trajectory stays on its floors and increases";
  return out;
}

CheckOutcome check_conjugate_exponent(VerifyCtx&) {
  namespace ex = sl::exponents;
  CheckOutcome out;
  out.tol = 1e-12;
  double worst = 0.0;
  long samples = 0;
  for (int n = 1; n <= 6; ++n) {
    for (double mu1 : {0.0, 0.5, 1.0, 2.0}) {
      if (n + mu1 <= 1.0) continue;
      const double p = ex::strauss(n + mu1);
      const double pprime = p / (p - 1.0);
      const double lhs = (n + 1.0 - ex::beta_q(n, mu1, p)) / pprime;
      worst = std::max(worst, std::abs(lhs - (1.0 + 1.0 / p)));
      ++samples;
    }
  }
  out.metric = worst;
  out.samples = samples;
  out.pass = worst <= out.tol;
  out.note = "conjugate-exponent identity at the shifted Strauss exponent";
  return out;
}

using CheckFn = CheckOutcome (*)(VerifyCtx&);

const std::vector<std::pair<std::string, CheckFn>>& check_registry() {
  static const std::vector<std::pair<std::string, CheckFn>> reg = {
      {"exponents-consistency", check_exponents_consistency},
      {"specfun-bessel", check_specfun_bessel},
      {"specfun-hypergeometric", check_specfun_hypergeometric},
      {"lambda-ode", check_lambda_ode},
      {"phi-ode", check_phi_ode},
      {"adjoint-ode", check_adjoint_ode},
      {"psi-bands", check_psi_bands},
      {"g-dynamics", check_g_dynamics},
      {"key-inequality", check_key_inequality},
      {"jbeta-lemma", check_jbeta},
      {"priori-bound", check_priori},
      {"fundamental-identity", check_identity},
      {"ledger-closed-forms", check_ledger_closed_forms},
      {"ledger-chain", check_ledger_chain},
      {"gap-identity", check_gap_identity},
      {"ode-floors", check_ode_floors},
      {"conjugate-exponent", check_conjugate_exponent},
  };
  return reg;
}

int cmd_verify(const sl::ExperimentConfig& cfg, const Common& c) {
  const auto& reg = check_registry();
  // the registry and the config-side name list must agree
  {
    const auto& names = sl::registered_checks();
    if (names.size() != reg.size()) throw std::logic_error("check registry out of sync");
    for (std::size_t i = 0; i < reg.size(); ++i)
      if (reg[i].first != names[i]) throw std::logic_error("check registry out of sync");
  }
  std::vector<std::size_t> selected;
  if (cfg.checks.empty()) {
    selected.resize(reg.size());
    for (std::size_t i = 0; i < reg.size(); ++i) selected[i] = i;
  } else {
    for (std::size_t i = 0; i < reg.size(); ++i)
      if (std::find(cfg.checks.begin(), cfg.checks.end(), reg[i].first) != cfg.checks.end())
        selected.push_back(i);
  }

  VerifyCtx ctx{cfg, std::nullopt, std::nullopt};
  json checks_json = json::object();
  std::size_t passed = 0;
  for (std::size_t i : selected) {
    const auto& [name, fn] = reg[i];
    CheckOutcome o;
    try {
      o = fn(ctx);
    } catch (const std::exception& e) {
      o = CheckOutcome{};
      o.error = e.what();
    }
    if (o.pass) ++passed;
    json jc{{"pass", o.pass}, {"metric", o.metric}, {"tol", o.tol}, {"samples", o.samples},
            {"note", o.note}};
    if (!o.error.empty()) jc["error"] = o.error;
    checks_json[name] = jc;
    if (!c.json_out) {
      if (o.error.empty())
        std::printf("[%s] %-24s metric=%-12s (tol %s, %ld samples)\n", o.pass ? "PASS" : "FAIL",
                    name.c_str(), num(o.metric).c_str(), num(o.tol).c_str(), o.samples);
      else
        std::printf("[FAIL] %-24s error: %s\n", name.c_str(), o.error.c_str());
    }
  }

  json report;
  report["model"] = model_to_json(cfg.model);
  report["checks"] = checks_json;
  report["passed"] = passed;
  report["total"] = selected.size();
  report["all_pass"] = passed == selected.size();
  const fs::path dir = ensure_outdir(cfg);
  write_json(dir / "verify_report.json", report);

  if (c.json_out)
    std::printf("%s\n", report.dump(2).c_str());
  else
    std::printf("verify: %zu/%zu checks passed\n", passed, selected.size());
  return passed == selected.size() ? 0 : 3;
}

// --------------------------------------------------------------- cmd: solve

int cmd_solve(const sl::ExperimentConfig& cfg, const Common& c) {
  const sl::ModelParams& mp = cfg.model;
  sl::SolverConfig sc;
  sc.T_max = cfg.grid_T_max;
  sc.nr = cfg.grid_nr;
  sc.cfl = cfg.grid_cfl;
  const sl::RadialGrid grid = sl::RadialGrid::for_horizon(mp.R, sc.T_max, sc.nr);
  sc.snap_interval = cfg.grid_snap_interval > 0.0 ? cfg.grid_snap_interval : sc.T_max / 64.0;
  logmsg(Level::info, "solve: T_max=" + num(sc.T_max) + " nr=" + std::to_string(sc.nr) +
                          " dr=" + num(grid.dr) + " snap=" + num(sc.snap_interval));
  const sl::SolveTrace trace = sl::solve_until_blowup(mp, grid, sc);

  const int rstride = std::max(1, grid.nr / 512);
  std::string csv = "t,r,u\n";
  for (const sl::Snapshot& snap : trace.snapshots)
    for (int i = 0; i <= grid.nr; i += rstride)
      csv += num(snap.t) + "," + num(grid.r(i)) + "," + num(snap.u[i]) + "\n";
  const fs::path dir = ensure_outdir(cfg);
  write_text(dir / "solution.csv", csv);

  json j;
  j["model"] = model_to_json(mp);
  j["status"] = sl::to_string(trace.status);
  j["t_end"] = trace.t_end;
  j["sup_end"] = trace.sup_end;
  j["dt_end"] = trace.dt_end;
  j["steps"] = trace.steps;
  j["snapshots"] = trace.snapshots.size();
  json cross = json::array();
  for (const sl::ThresholdCrossing& tc : trace.crossings)
    cross.push_back(json{{"threshold", tc.threshold}, {"time", tc.time}});
  j["crossings"] = cross;
  write_json(dir / "solve_summary.json", j);

  if (c.json_out) {
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("status:     %s\n", sl::to_string(trace.status));
    std::printf("t_end:      %s\n", num(trace.t_end).c_str());
    std::printf("sup_end:    %s\n", num(trace.sup_end).c_str());
    std::printf("steps:      %lld\n", static_cast<long long>(trace.steps));
    for (const sl::ThresholdCrossing& tc : trace.crossings)
      std::printf("crossing:   sup = %-8s at t = %s\n", num(tc.threshold).c_str(),
                  num(tc.time).c_str());
    std::printf("wrote %s\n", (dir / "solution.csv").string().c_str());
  }
  return trace.status == sl::SolveStatus::non_finite ? 4 : 0;
}

// ------------------------------------------------------ cmd: lifespan-sweep

struct SweepRow {
  double eps = 0.0;
  sl::LifespanEstimate est;
  std::string status = "ok";  // ok | no-blow-up | error
};

int cmd_lifespan_sweep(const sl::ExperimentConfig& cfg, const Common& c) {
  if (cfg.case_kind != "subcritical")
    throw sl::ConfigError("lifespan-sweep requires case = subcritical (got '" + cfg.case_kind + "')");
  const sl::exponents::ExponentReport rep = sl::exponents::classify(cfg.model);
  if (!rep.flags.thm_subcritical_ok)
    throw sl::ConfigError(std::string("lifespan-sweep: model is outside the sub-critical "
                                      "blow-up hypotheses (regime ") +
                          sl::exponents::to_string(rep.regime) + ")");
  const std::vector<double> ladder = sl::resolved_sweep(cfg);

  std::vector<SweepRow> rows(ladder.size());
  const int workers = pick_workers(c.workers, ladder.size());
  logmsg(Level::info, "lifespan-sweep: " + std::to_string(ladder.size()) + " runs on " +
                          std::to_string(workers) + " workers");
  parallel_for(ladder.size(), workers, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.eps = ladder[i];
    sl::ModelParams mp = cfg.model;
    mp.eps = ladder[i];
    sl::SolverConfig sc;
    sc.T_max = cfg.grid_T_max;
    sc.nr = cfg.grid_nr;
    sc.cfl = cfg.grid_cfl;
    try {
      row.est = sl::estimate_lifespan(mp, sc);
      logmsg(Level::info, "eps=" + num(row.eps) + ": T_est=" + num(row.est.T_est) +
                              (row.est.converged ? "" : " (not dt-converged)"));
    } catch (const sl::NoBlowUp&) {
      row.status = "no-blow-up";
      logmsg(Level::warn, "eps=" + num(row.eps) + ": ladder not completed by T_max");
    } catch (const std::exception& e) {
      row.status = "error";
      logmsg(Level::error, "eps=" + num(row.eps) + ": " + e.what());
    }
  });

  const std::array<double, 4> rungs{1e3, 1e4, 1e5, 1e6};
  std::string csv = "eps,T_est,converged,dt,T_1e3,T_1e4,T_1e5,T_1e6,status\n";
  for (const SweepRow& row : rows) {
    if (row.status == "ok") {
      csv += num(row.eps) + "," + num(row.est.T_est) + "," + (row.est.converged ? "1" : "0") +
             "," + num(row.est.dt_used);
      for (double rng : rungs) {
        double t = std::numeric_limits<double>::quiet_NaN();
        for (const sl::ThresholdCrossing& tc : row.est.T_at_threshold)
          if (tc.threshold == rng) t = tc.time;
        csv += "," + num(t);
      }
      csv += ",ok\n";
    } else {
      csv += num(row.eps) + ",nan,0,nan,nan,nan,nan,nan," + row.status + "\n";
    }
  }
  const fs::path dir = ensure_outdir(cfg);
  write_text(dir / "lifespan_sweep.csv", csv);

  std::vector<std::pair<double, double>> pts;
  for (const SweepRow& row : rows)
    if (row.status == "ok") pts.push_back({row.eps, row.est.T_est});

  json j;
  j["model"] = model_to_json(cfg.model);
  j["rows"] = json::array();
  for (const SweepRow& row : rows)
    j["rows"].push_back(json{{"eps", row.eps},
                             {"T_est", row.status == "ok" ? row.est.T_est
                                                          : std::numeric_limits<double>::quiet_NaN()},
                             {"converged", row.status == "ok" && row.est.converged},
                             {"status", row.status}});
  const double theoretical = -2.0 * cfg.model.p * (cfg.model.p - 1.0) / rep.gamma;
  j["theoretical_slope"] = theoretical;

  if (!c.json_out) std::printf("wrote %s\n", (dir / "lifespan_sweep.csv").string().c_str());
  if (pts.size() >= 3) {
    const sl::ScalingFit fit = sl::fit_scaling(pts, sl::ScalingMode::power_law);
    const double rel_dev = std::abs(fit.slope - theoretical) / std::abs(theoretical);
    const char* verdict = rel_dev <= 0.30 ? "consistent" : "inconsistent";
    j["fit"] = json{{"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared},
                    {"points_used", pts.size()},
                    {"relative_deviation", rel_dev},
                    {"verdict", verdict}};
    if (!c.json_out) {
      std::printf("fit:        log T = %s log eps + %s   (r^2 = %s, %zu points)\n",
                  num(fit.slope).c_str(), num(fit.intercept).c_str(), num(fit.r_squared).c_str(),
                  pts.size());
      std::printf("theory:     slope -2p(p-1)/gamma = %s\n", num(theoretical).c_str());
      std::printf("verdict:    %s (relative deviation %s)\n", verdict, num(rel_dev).c_str());
    }
  } else {
    j["fit"] = nullptr;
    if (!c.json_out)
      std::printf("fit refused: need at least 3 blow-up points, have %zu\n", pts.size());
  }
  write_json(dir / "lifespan_fit.json", j);
  if (c.json_out) std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

// -------------------------------------------------- cmd: critical-ode-sweep

int cmd_critical_ode_sweep(const sl::ExperimentConfig& cfg, const Common& c) {
  if (cfg.case_kind != "ode-critical")
    throw sl::ConfigError("critical-ode-sweep requires case = ode-critical (got '" +
                          cfg.case_kind + "')");
  if (!(cfg.model.p > 1.0))
    throw sl::ConfigError("critical-ode-sweep: need p > 1");
  const std::vector<double> ladder = sl::resolved_sweep(cfg);

  struct Row {
    double eps = 0.0, tau_star = 0.0, t_star = 0.0;
    std::string status = "ok";
  };
  std::vector<Row> rows(ladder.size());
  const int workers = pick_workers(c.workers, ladder.size());
  logmsg(Level::info, "critical-ode-sweep: " + std::to_string(ladder.size()) + " runs on " +
                          std::to_string(workers) + " workers");
  parallel_for(ladder.size(), workers, [&](std::size_t i) {
    Row& row = rows[i];
    row.eps = ladder[i];
    try {
      const sl::CriticalOdeRun run =
          sl::critical_ode_integrate(cfg.model.p, cfg.ode_C, cfg.ode_c0, ladder[i]);
      row.tau_star = run.tau_star;
      row.t_star = run.t_star;
      logmsg(Level::info, "eps=" + num(row.eps) + ": tau*=" + num(run.tau_star));
    } catch (const sl::NoBlowUp&) {
      row.status = "no-blow-up";
      row.tau_star = row.t_star = std::numeric_limits<double>::quiet_NaN();
      logmsg(Level::warn, "eps=" + num(row.eps) + ": ladder not crossed by tau_cap");
    } catch (const std::exception& e) {
      row.status = "error";
      row.tau_star = row.t_star = std::numeric_limits<double>::quiet_NaN();
      logmsg(Level::error, "eps=" + num(row.eps) + ": " + e.what());
    }
  });

  std::string csv = "eps,tau_star,t_star,status\n";
  for (const Row& row : rows)
    csv += num(row.eps) + "," + num(row.tau_star) + "," + num(row.t_star) + "," + row.status + "\n";
  const fs::path dir = ensure_outdir(cfg);
  write_text(dir / "critical_ode_sweep.csv", csv);

  std::vector<std::pair<double, double>> pts;
  for (const Row& row : rows)
    if (row.status == "ok") pts.push_back({row.eps, row.tau_star});

  json j;
  j["p"] = cfg.model.p;
  j["C"] = cfg.ode_C;
  j["c0"] = cfg.ode_c0;
  j["rows"] = json::array();
  for (const Row& row : rows)
    j["rows"].push_back(
        json{{"eps", row.eps}, {"tau_star", row.tau_star}, {"t_star", row.t_star}, {"status", row.status}});
  const double theoretical = -cfg.model.p * (cfg.model.p - 1.0);
  j["theoretical_slope"] = theoretical;

  if (!c.json_out) std::printf("wrote %s\n", (dir / "critical_ode_sweep.csv").string().c_str());
  if (pts.size() >= 3) {
    const sl::ScalingFit fit = sl::fit_scaling(pts, sl::ScalingMode::power_law);
    const double rel_dev = std::abs(fit.slope - theoretical) / std::abs(theoretical);
    const char* verdict = rel_dev <= 0.15 ? "consistent" : "inconsistent";
    j["fit"] = json{{"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared},
                    {"points_used", pts.size()},
                    {"relative_deviation", rel_dev},
                    {"verdict", verdict}};
    if (!c.json_out) {
      std::printf("fit:        log tau* = %s log eps + %s   (r^2 = %s, %zu points)\n",
                  num(fit.slope).c_str(), num(fit.intercept).c_str(), num(fit.r_squared).c_str(),
                  pts.size());
      std::printf("theory:     slope -p(p-1) = %s\n", num(theoretical).c_str());
      std::printf("verdict:    %s (relative deviation %s)\n", verdict, num(rel_dev).c_str());
    }
  } else {
    j["fit"] = nullptr;
    if (!c.json_out)
      std::printf("fit refused: need at least 3 blow-up points, have %zu\n", pts.size());
  }
  write_json(dir / "critical_ode_fit.json", j);
  if (c.json_out) std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

// -------------------------------------------------------------- cmd: ledger

int cmd_ledger(const sl::ExperimentConfig& cfg, const Common& c) {
  const sl::ModelParams& mp = cfg.model;
  const sl::IterationLedger led = sl::build_ledger(mp, cfg.C1, cfg.j_max);
  const double g = sl::exponents::gamma(mp.p, mp.n + mp.mu1);

  json j;
  j["model"] = model_to_json(mp);
  j["C0"] = led.C0;
  j["C1"] = led.C1;
  j["C2"] = led.C2;
  j["C3"] = led.C3;
  j["C4"] = led.C4;
  j["r2"] = led.r2;
  j["alpha"] = led.alpha;
  j["beta"] = led.beta;
  j["Sp_inf"] = led.Sp_inf;
  j["gamma"] = g;
  j["a"] = led.a;
  j["b"] = led.b;
  j["log_D"] = led.log_D;
  double worst_cf = 0.0;
  {
    json cf_arr = json::array();
    for (std::size_t jj = 1; jj <= led.a.size(); ++jj) {
      const sl::LedgerClosedForms cf = sl::closed_forms(led, static_cast<int>(jj));
      cf_arr.push_back(json{{"j", jj},
                            {"a", cf.a},
                            {"b", cf.b},
                            {"log_D", cf.log_D},
                            {"log_D_lower", cf.log_D_lower}});
      worst_cf = std::max(worst_cf, std::abs(cf.a - led.a[jj - 1]));
      worst_cf = std::max(worst_cf, std::abs(cf.b - led.b[jj - 1]));
    }
    j["closed_forms"] = cf_arr;
  }
  j["gap_identity_residual"] = std::abs(led.beta - led.alpha - g / (2.0 * (mp.p - 1.0)));

  const sl::exponents::ExponentReport rep = sl::exponents::classify(mp);
  if (g > 0.0 && rep.flags.thm_subcritical_ok) {
    const sl::BlowupTimeBound bt = sl::subcritical_blowup_time(led, cfg.T0);
    j["blowup"] = json{{"time", bt.time},
                       {"eps_term", bt.eps_term},
                       {"T0", bt.T0},
                       {"J_at_time", sl::ledger_J(led, bt.time, bt.T0)}};
  }

  const fs::path dir = ensure_outdir(cfg);
  write_json(dir / "ledger.json", j);

  if (c.json_out) {
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }
  std::printf("model:      n=%d mu1=%s mu2^2=%s p=%s eps=%s R=%s\n", mp.n, num(mp.mu1).c_str(),
              num(mp.mu2sq).c_str(), num(mp.p).c_str(), num(mp.eps).c_str(), num(mp.R).c_str());
  std::printf("constants:  C0=%s C1=%s C2=%s C3=%s C4=%s\n", num(led.C0).c_str(),
              num(led.C1).c_str(), num(led.C2).c_str(), num(led.C3).c_str(), num(led.C4).c_str());
  std::printf("exponents:  r2=%s alpha=%s beta=%s Sp_inf=%s gamma=%s\n", num(led.r2).c_str(),
              num(led.alpha).c_str(), num(led.beta).c_str(), num(led.Sp_inf).c_str(),
              num(g).c_str());
  std::printf("%4s %14s %14s %16s\n", "j", "a_j", "b_j", "log D_j");
  const std::size_t shown = std::min<std::size_t>(led.a.size(), 12);
  for (std::size_t jj = 0; jj < shown; ++jj)
    std::printf("%4zu %14s %14s %16s\n", jj + 1, num(led.a[jj]).c_str(), num(led.b[jj]).c_str(),
                num(led.log_D[jj]).c_str());
  if (led.a.size() > shown)
    std::printf("  .. %zu more rows (see ledger.json)\n", led.a.size() - shown);
  std::printf("closed-form agreement (a, b): %s\n", num(worst_cf).c_str());
  if (j.contains("blowup"))
    std::printf("blow-up:    T(eps) <= %s  (eps term %s, pivot T0 = %s)\n",
                num(j["blowup"]["time"].get<double>()).c_str(),
                num(j["blowup"]["eps_term"].get<double>()).c_str(), num(cfg.T0).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  g_level = level_from_env();

  CLI::App app{"strausslab: blow-up and lifespan workbench for semilinear waves with "
               "scale-invariant damping and mass"};
  app.require_subcommand(1);

  Common c;
  std::function<int(const sl::ExperimentConfig&, const Common&)> action;

  CLI::App* s_exp = app.add_subcommand("exponents", "critical exponents and regime classification");
  attach_common(s_exp, c, false);
  attach_model_overrides(s_exp, c);
  s_exp->callback([&] { action = cmd_exponents; });

  CLI::App* s_verify = app.add_subcommand("verify", "run the registered structural checks");
  attach_common(s_verify, c, false);
  s_verify->callback([&] { action = cmd_verify; });

  CLI::App* s_solve = app.add_subcommand("solve", "single radial solve; writes solution.csv");
  attach_common(s_solve, c, false);
  attach_model_overrides(s_solve, c);
  s_solve->callback([&] { action = cmd_solve; });

  CLI::App* s_sweep = app.add_subcommand("lifespan-sweep", "lifespan vs epsilon with a scaling fit");
  attach_common(s_sweep, c, true);
  s_sweep->callback([&] { action = cmd_lifespan_sweep; });

  CLI::App* s_ode = app.add_subcommand("critical-ode-sweep",
                                       "comparison-ODE blow-up times vs epsilon");
  attach_common(s_ode, c, true);
  s_ode->callback([&] { action = cmd_critical_ode_sweep; });

  CLI::App* s_led = app.add_subcommand("ledger", "iteration constants, sequences, and the bound");
  attach_common(s_led, c, false);
  attach_model_overrides(s_led, c);
  s_led->callback([&] { action = cmd_ledger; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  return guarded([&] {
    const sl::ExperimentConfig cfg = load_config(c);
    return action(cfg, c);
  });
}

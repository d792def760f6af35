#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "strausslab/errors.hpp"
#include "strausslab/exponents.hpp"
#include "strausslab/testfuncs.hpp"

// Radially symmetric finite-difference solver for
//   u_tt - Delta u + mu1/(1+t) u_t + mu2sq/(1+t)^2 u = |u|^p
// with data (eps f, eps g) supported in B_R: explicit leapfrog in time with
// the damping term averaged across the levels (so the update stays explicit
// and second order), standard radial stencil in space, blow-up detection via
// a threshold ladder, and lifespan extrapolation from the ladder times.

namespace strausslab {

/// Thrown by estimate_lifespan when the top threshold is never reached
/// within the time horizon.
struct NoBlowUp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform radial mesh: nodes r_i = i * dr, i = 0..nr, with u(r_nr) pinned to
/// zero.  Unit wave speed, so the far boundary is honest as long as
/// r_max >= R + T_max + 2 dr.
struct RadialGrid {
  double r_max;
  int nr;
  double dr;

  RadialGrid(double r_max_, int nr_) : r_max(r_max_), nr(nr_), dr(r_max_ / nr_) {
    if (nr_ < 2 || !(r_max_ > 0.0))
      throw DomainError("RadialGrid: need nr >= 2 and r_max > 0");
  }

  double r(int i) const { return i * dr; }

  bool covers(double R, double T_max) const {
    return r_max >= R + T_max + 2.0 * dr;
  }

  /// Smallest mesh (for a given cell count) whose boundary cannot be reached
  /// from supp(data) within T_max: r_max = R + T_max + 4 dr.
  static RadialGrid for_horizon(double R, double T_max, int nr) {
    if (nr <= 8) throw DomainError("RadialGrid::for_horizon: nr too small");
    return RadialGrid((R + T_max) / (1.0 - 4.0 / nr), nr);
  }
};

struct SolverConfig {
  double T_max = 20.0;
  int nr = 2000;
  double cfl = 0.5;    // dt = cfl * dr
  bool nonlinear = true;
  bool zero_d = false; // drop the Laplacian: spatially flat ODE mode
  double dt0 = 1e-3;   // base time step in zero-d mode
  double snap_interval = 0.0; // <= 0: keep only the final state
  std::vector<double> thresholds = {1e3, 1e4, 1e5, 1e6};
};

/// Two consecutive time levels; u_curr lives at time t, u_prev at t - dt.
struct WaveState {
  double t = 0.0;
  double dt = 0.0;
  std::vector<double> u_prev, u_curr;
  std::vector<double> scratch; // reused by step() to avoid reallocating
};

enum class SolveStatus { blew_up, timed_out, non_finite };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::blew_up: return "blew-up";
    case SolveStatus::timed_out: return "timed-out";
    case SolveStatus::non_finite: return "non-finite";
  }
  return "?";
}

struct ThresholdCrossing {
  double threshold;
  double time;
};

struct Snapshot {
  double t;
  std::vector<double> u;
};

struct SolveTrace {
  SolveStatus status = SolveStatus::timed_out;
  double t_end = 0.0;   // last time with a finite state
  double sup_end = 0.0;
  double dt_end = 0.0;
  std::int64_t steps = 0;
  std::vector<ThresholdCrossing> crossings;
  std::vector<Snapshot> snapshots;
  std::vector<double> u_final;
};

inline double sup_norm(const std::vector<double>& u) {
  double m = 0.0;
  for (double v : u) {
    const double a = std::abs(v);
    if (a > m) m = a;
  }
  return m;
}

/// Last index carrying more than `rel` of the sup norm (-1 for a zero field).
inline int support_index(const std::vector<double>& u, double rel = 1e-14) {
  const double m = sup_norm(u);
  if (m == 0.0) return -1;
  for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i) {
    if (std::abs(u[i]) > rel * m) return i;
  }
  return -1;
}

namespace detail {

inline double power_source(double u, double p, bool p_is_two) {
  return p_is_two ? u * u : std::pow(std::abs(u), p);
}

inline double laplacian_at(const std::vector<double>& u, int i, int n, double dr) {
  if (i == 0) return n * 2.0 * (u[1] - u[0]) / (dr * dr);
  return (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dr * dr) +
         (n - 1.0) / (i * dr) * (u[i + 1] - u[i - 1]) / (2.0 * dr);
}

} // namespace detail

/// Data levels at t = 0 (u_prev slot) and t = dt (u_curr slot); the second
/// level comes from the Taylor expansion
///   u(dt) = eps f + dt eps g + dt^2/2 (Delta(eps f) - mu1 eps g
///                                      - mu2sq eps f + |eps f|^p).
inline WaveState initial_state(const ModelParams& mp, const RadialGrid& g,
                               const SolverConfig& cfg) {
  const int m = cfg.zero_d ? 1 : g.nr + 1;
  const int last = cfg.zero_d ? 0 : g.nr - 1;
  const double dt = cfg.zero_d ? cfg.dt0 : cfg.cfl * g.dr;
  if (!(dt > 0.0)) throw DomainError("initial_state: time step must be positive");

  WaveState st;
  st.u_prev.assign(m, 0.0);
  st.u_curr.assign(m, 0.0);
  st.scratch.assign(m, 0.0);
  for (int i = 0; i < m; ++i)
    st.u_prev[i] = mp.eps * profile_f(mp, cfg.zero_d ? 0.0 : g.r(i));

  const bool p2 = mp.p == 2.0;
  for (int i = 0; i <= last; ++i) {
    const double lap = cfg.zero_d ? 0.0 : detail::laplacian_at(st.u_prev, i, mp.n, g.dr);
    const double gv = mp.eps * profile_g(mp, cfg.zero_d ? 0.0 : g.r(i));
    const double src = cfg.nonlinear ? detail::power_source(st.u_prev[i], mp.p, p2) : 0.0;
    st.u_curr[i] = st.u_prev[i] + dt * gv +
                   0.5 * dt * dt * (lap - mp.mu1 * gv - mp.mu2sq * st.u_prev[i] + src);
  }
  st.t = dt;
  st.dt = dt;
  return st;
}

/// One leapfrog step
///   u_new = [2u - u_prev + dt^2 (Delta_r u - mu2sq u/(1+t)^2 + |u|^p)
///            + (mu1 dt/(2(1+t))) u_prev] / (1 + mu1 dt/(2(1+t)))
/// advancing the state in place.  Returns sup|u_new|; if the update produced
/// NaN/Inf the state is left untouched and NaN is returned so the caller can
/// flag blow-up at the previous step.
inline double step(WaveState& st, const ModelParams& mp, const RadialGrid& g,
                   const SolverConfig& cfg) {
  const double dt = st.dt;
  const double s = 1.0 + st.t;
  const double a = mp.mu1 * dt / (2.0 * s);
  const double m22 = mp.mu2sq / (s * s);
  const int last = cfg.zero_d ? 0 : g.nr - 1;
  const bool p2 = mp.p == 2.0;

  const std::vector<double>& u = st.u_curr;
  const std::vector<double>& up = st.u_prev;
  std::vector<double>& un = st.scratch;

  double sup = 0.0;
  bool finite = true;
  for (int i = 0; i <= last; ++i) {
    const double lap = cfg.zero_d ? 0.0 : detail::laplacian_at(u, i, mp.n, g.dr);
    const double src = cfg.nonlinear ? detail::power_source(u[i], mp.p, p2) : 0.0;
    const double v =
        (2.0 * u[i] - up[i] + dt * dt * (lap - m22 * u[i] + src) + a * up[i]) /
        (1.0 + a);
    un[i] = v;
    const double mag = std::abs(v);
    if (mag > sup) sup = mag;
    if (!std::isfinite(v)) finite = false;
  }
  if (!finite || !std::isfinite(sup)) return std::nan("");

  if (!cfg.zero_d) un[g.nr] = 0.0;
  st.u_prev.swap(st.u_curr); // old current becomes previous
  st.u_curr.swap(st.scratch); // new level in place, old previous recycled
  st.t += dt;
  return sup;
}

/// Rebuild the previous level for a new (smaller) time step: recover u_t at
/// the current time from the backward difference, refine it once through the
/// equation (which also supplies u_tt), then Taylor back by dt_new.
inline void reanchor_time_step(WaveState& st, const ModelParams& mp,
                               const RadialGrid& g, const SolverConfig& cfg,
                               double dt_new) {
  const double s = 1.0 + st.t;
  const int last = cfg.zero_d ? 0 : g.nr - 1;
  const bool p2 = mp.p == 2.0;
  for (int i = 0; i <= last; ++i) {
    const double u = st.u_curr[i];
    const double lap = cfg.zero_d ? 0.0 : detail::laplacian_at(st.u_curr, i, mp.n, g.dr);
    const double src = cfg.nonlinear ? detail::power_source(u, mp.p, p2) : 0.0;
    const double fixed = lap - mp.mu2sq * u / (s * s) + src;
    double ut = (u - st.u_prev[i]) / st.dt;       // u_t(t) - (dt/2) u_tt + ...
    double utt = fixed - mp.mu1 / s * ut;
    ut += 0.5 * st.dt * utt;                      // second-order backward estimate
    utt = fixed - mp.mu1 / s * ut;
    st.u_prev[i] = u - dt_new * ut + 0.5 * dt_new * dt_new * utt;
  }
  st.dt = dt_new;
}

/// Called after every accepted time level (including t = 0 and the Taylor
/// level) with the current time and radial values.
using StepObserver = std::function<void(double t, const std::vector<double>& u)>;

/// March until the top threshold is crossed (blew_up), the state goes
/// non-finite (non_finite: flagged at the last good level), or t reaches
/// T_max (timed_out: a valid outcome).  Threshold crossing times are
/// log-interpolated between levels.  Once sup|u| > 10^3 the step obeys
/// dt <= 0.1 sup^{-(p-1)/2} (the local ODE time scale), halving as needed;
/// dt never increases.
inline SolveTrace solve_until_blowup(const ModelParams& mp, const RadialGrid& g,
                                     const SolverConfig& cfg,
                                     const StepObserver& observe = {}) {
  mp.validate();
  if (!cfg.zero_d && !g.covers(mp.R, cfg.T_max))
    throw DomainError("solve_until_blowup: grid too small for the horizon "
                      "(need r_max >= R + T_max + 2 dr)");

  std::vector<double> ladder = cfg.thresholds;
  std::sort(ladder.begin(), ladder.end());
  const double top = ladder.empty() ? std::nan("") : ladder.back();

  SolveTrace tr;
  WaveState st = initial_state(mp, g, cfg);
  const double sup0 = sup_norm(st.u_prev);
  if (!ladder.empty() && sup0 >= ladder.front())
    throw DomainError("solve_until_blowup: initial amplitude already beyond "
                      "the first threshold");

  if (observe) {
    observe(0.0, st.u_prev);
    observe(st.t, st.u_curr);
  }
  double next_snap = 0.0;
  if (cfg.snap_interval > 0.0) {
    tr.snapshots.push_back({0.0, st.u_prev});
    next_snap = cfg.snap_interval;
  }

  std::size_t next_threshold = 0;
  double t_prev = 0.0, sup_prev = sup0;
  auto record_crossings = [&](double t_now, double sup_now) {
    while (next_threshold < ladder.size() && sup_now >= ladder[next_threshold]) {
      const double M = ladder[next_threshold];
      double tau = t_now;
      if (sup_prev > 0.0 && sup_now > sup_prev) {
        tau = t_prev + (t_now - t_prev) * (std::log(M) - std::log(sup_prev)) /
                           (std::log(sup_now) - std::log(sup_prev));
      }
      tr.crossings.push_back({M, tau});
      ++next_threshold;
    }
    t_prev = t_now;
    sup_prev = sup_now;
  };

  double sup = sup_norm(st.u_curr);
  record_crossings(st.t, sup);

  const double clamp_onset = 1e3;
  while (st.t < cfg.T_max - 1e-12) {
    if (!ladder.empty() && sup >= top) break;
    if (cfg.nonlinear && sup > clamp_onset) {
      const double cap = 0.1 * std::pow(sup, -0.5 * (mp.p - 1.0));
      while (st.dt > cap) reanchor_time_step(st, mp, g, cfg, 0.5 * st.dt);
    }
    const double t_before = st.t;
    const double sup_new = step(st, mp, g, cfg);
    ++tr.steps;
    if (!std::isfinite(sup_new)) {
      tr.status = SolveStatus::non_finite;
      tr.t_end = t_before;
      tr.sup_end = sup;
      tr.dt_end = st.dt;
      tr.u_final = st.u_curr;
      return tr;
    }
    sup = sup_new;
    if (observe) observe(st.t, st.u_curr);
    record_crossings(st.t, sup);
    if (cfg.snap_interval > 0.0 && st.t >= next_snap - 1e-12) {
      tr.snapshots.push_back({st.t, st.u_curr});
      while (next_snap <= st.t + 1e-12) next_snap += cfg.snap_interval;
    }
  }

  tr.status = (!ladder.empty() && sup >= top) ? SolveStatus::blew_up
                                              : SolveStatus::timed_out;
  tr.t_end = st.t;
  tr.sup_end = sup;
  tr.dt_end = st.dt;
  tr.u_final = st.u_curr;
  return tr;
}

struct LifespanEstimate {
  double T_est = 0.0;
  std::vector<ThresholdCrossing> T_at_threshold;
  double dt_used = 0.0; // base step of the accepted run (before clamping)
  bool converged = false;
  bool hypotheses_ok = true; // blow-up regime per the exponent classification
  ModelParams params;
};

/// Least-squares intercept of T(M) = T_est - c M^{-(p-1)/2}.  The basis
/// follows the local blow-up rate u ~ C (T-t)^{-2/(p-1)}, which gives
/// T - T(M) proportional to M^{-(p-1)/2}.
inline double fit_blowup_time(const std::vector<ThresholdCrossing>& cr, double p) {
  const std::size_t k = cr.size();
  if (k < 2) throw DomainError("fit_blowup_time: need at least two thresholds");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& c : cr) {
    const double x = std::pow(c.threshold, -0.5 * (p - 1.0));
    sx += x;
    sy += c.time;
    sxx += x * x;
    sxy += x * c.time;
  }
  const double denom = k * sxx - sx * sx;
  const double slope = (k * sxy - sx * sy) / denom;
  return (sy - slope * sx) / k;
}

/// Threshold-ladder lifespan estimate with time-step verification: the base
/// step is halved until two consecutive refinements agree on T_est within 1%
/// (at most four halvings; `converged` records whether agreement was
/// reached).  Throws NoBlowUp if the ladder is never completed in T_max.
inline LifespanEstimate estimate_lifespan(const ModelParams& mp,
                                          const SolverConfig& cfg = {}) {
  mp.validate();
  if (cfg.thresholds.empty())
    throw DomainError("estimate_lifespan: threshold ladder must be nonempty");

  auto run_once = [&](double scale) {
    SolverConfig c = cfg;
    c.cfl = cfg.cfl * scale;
    c.dt0 = cfg.dt0 * scale;
    c.snap_interval = 0.0;
    const RadialGrid grid = c.zero_d
                                ? RadialGrid(1.0, 2)
                                : RadialGrid::for_horizon(mp.R, c.T_max, c.nr);
    SolveTrace t = solve_until_blowup(mp, grid, c);
    if (t.status == SolveStatus::timed_out)
      throw NoBlowUp("estimate_lifespan: top threshold not reached before T_max");
    if (t.crossings.size() < 2)
      throw AccuracyError("estimate_lifespan: too few threshold crossings to fit");
    const double base_dt = c.zero_d ? c.dt0 : c.cfl * grid.dr;
    return std::pair<double, SolveTrace>(base_dt, std::move(t));
  };

  const exponents::ExponentReport rep = exponents::classify(mp);

  double scale = 1.0;
  auto [dt_prev, tr_prev] = run_once(scale);
  double T_prev = fit_blowup_time(tr_prev.crossings, mp.p);

  LifespanEstimate est;
  est.params = mp;
  est.hypotheses_ok = rep.flags.thm_subcritical_ok || rep.flags.thm_critical_ok;

  for (int k = 0; k < 4; ++k) {
    scale *= 0.5;
    auto [dt_cur, tr_cur] = run_once(scale);
    const double T_cur = fit_blowup_time(tr_cur.crossings, mp.p);
    if (std::abs(T_cur - T_prev) <= 0.01 * std::abs(T_cur)) {
      est.T_est = T_cur;
      est.T_at_threshold = tr_cur.crossings;
      est.dt_used = dt_cur;
      est.converged = true;
      return est;
    }
    T_prev = T_cur;
    tr_prev = std::move(tr_cur);
    dt_prev = dt_cur;
  }
  est.T_est = T_prev;
  est.T_at_threshold = tr_prev.crossings;
  est.dt_used = dt_prev;
  est.converged = false;
  return est;
}

/// Discrete energy sum over cells of (u_t^2 + u_r^2) r^{n-1} dr with u_t the
/// backward level difference and u_r the forward cell difference (midpoint
/// radial weight).  Diagnostic only: used by the dissipation checks.
inline double discrete_energy(const WaveState& st, const RadialGrid& g, int n) {
  double e = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    const double ut = (st.u_curr[i] - st.u_prev[i]) / st.dt;
    const double ur = (st.u_curr[i + 1] - st.u_curr[i]) / g.dr;
    const double rm = (i + 0.5) * g.dr;
    e += (ut * ut + ur * ur) * std::pow(rm, n - 1.0) * g.dr;
  }
  return e;
}

} // namespace strausslab

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "strausslab/errors.hpp"
#include "strausslab/exponents.hpp"
#include "strausslab/solver.hpp"

namespace strausslab {

// Guard against runaway sequence lengths: the D-sequence lives in log space,
// but a_j, b_j ~ p^j overflow double well before j = 1000.
struct OverflowGuard : std::length_error {
  using std::length_error::length_error;
};

// Lower-bound iteration ledger for the sub-critical blow-up argument.
// Sequences are stored 0-indexed: a[0] is a_1, log_D[0] is log D_1, etc.
struct IterationLedger {
  ModelParams params;
  double r2 = 0.0;  // larger characteristic root

  double C0 = 0.0;  // (meas B_1)^{1-p} R^{-n(p-1)}, from the Holder step
  double C1 = 0.0;  // fitted lower-bound constant for the L^p mass
  double C2 = 0.0;  // C1 / ((n+r2+1)(n+r2+2))
  double C3 = 0.0;  // C0 / beta^2, slack constant of the D-chain
  double C4 = 0.0;  // lifespan prefactor, see subcritical_blowup_time

  std::vector<double> a;      // spatial-weight exponents
  std::vector<double> b;      // time-weight exponents
  std::vector<double> log_D;  // log of the lower-bound amplitudes

  double alpha = 0.0;     // p^{j-1} growth coefficient of a_j
  double beta = 0.0;      // p^{j-1} growth coefficient of b_j
  double Sp_inf = 0.0;    // summed log-denominator tail, see closed form
};

// Closed-form values for step j (1-indexed).  log_D is the exact solved
// recursion (partial sum with closed-form b_k); log_D_lower drops the
// finite tail in favour of Sp_inf and is only an asymptotic lower bound.
struct LedgerClosedForms {
  double a = 0.0;
  double b = 0.0;
  double log_D = 0.0;
  double log_D_lower = 0.0;
};

struct BlowupTimeBound {
  double time = 0.0;      // max of the two admissible arms
  double eps_term = 0.0;  // C4 * eps^{-2p(p-1)/gamma}, the eps-driven arm minus T0
  double T0 = 0.0;
};

namespace detail {

inline double unit_ball_measure(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace detail

inline IterationLedger build_ledger(const ModelParams& mp, double C1_fit, int j_max) {
  if (j_max < 1) throw DomainError("build_ledger: j_max must be >= 1");
  if (j_max > 200)
    throw OverflowGuard("build_ledger: j_max > 200 would overflow the exponent sequences");
  if (mp.p <= 1.0) throw DomainError("build_ledger: requires p > 1");
  if (!(C1_fit > 0.0)) throw DomainError("build_ledger: requires C1 > 0");
  if (exponents::delta(mp.mu1, mp.mu2sq) < 0.0)
    throw DomainError("build_ledger: requires delta >= 0");

  IterationLedger led;
  led.params = mp;
  led.r2 = exponents::characteristic_roots(mp.mu1, mp.mu2sq).r2;

  const double n = static_cast<double>(mp.n);
  const double p = mp.p;
  const double r2 = led.r2;

  led.C0 = std::pow(detail::unit_ball_measure(mp.n), 1.0 - p) *
           std::pow(mp.R, -n * (p - 1.0));
  led.C1 = C1_fit;
  led.C2 = C1_fit / ((n + r2 + 1.0) * (n + r2 + 2.0));

  led.a.resize(static_cast<std::size_t>(j_max));
  led.b.resize(static_cast<std::size_t>(j_max));
  led.log_D.resize(static_cast<std::size_t>(j_max));

  led.a[0] = r2 + 1.0 + (n + mp.mu1 - 1.0) * p / 2.0;
  led.b[0] = n + r2 + 2.0;
  led.log_D[0] = std::log(led.C2) + p * std::log(mp.eps);

  const double log_C0 = std::log(led.C0);
  for (int j = 1; j < j_max; ++j) {
    const auto k = static_cast<std::size_t>(j);
    led.a[k] = r2 + 1.0 + n * (p - 1.0) + p * led.a[k - 1];
    led.b[k] = r2 + 3.0 + p * led.b[k - 1];
    led.log_D[k] = log_C0 + p * led.log_D[k - 1] -
                   std::log((r2 + p * led.b[k - 1] + 2.0) * (r2 + p * led.b[k - 1] + 3.0));
  }

  led.alpha = led.a[0] + n + (r2 + 1.0) / (p - 1.0);
  led.beta = led.b[0] + (r2 + 3.0) / (p - 1.0);
  led.C3 = led.C0 / (led.beta * led.beta);
  led.Sp_inf = 2.0 * p * std::log(p) / ((p - 1.0) * (p - 1.0)) -
               p * std::log(led.C3) / (p - 1.0);

  const double gam = exponents::gamma(p, n + mp.mu1);
  if (gam > 0.0) {
    led.C4 = std::pow(std::exp(led.Sp_inf + led.alpha * std::log(2.0) + 1.0) / led.C2,
                      2.0 * (p - 1.0) / gam);
  }
  return led;
}

inline LedgerClosedForms closed_forms(const IterationLedger& led, int j) {
  if (j < 1) throw DomainError("closed_forms: j must be >= 1");
  const double p = led.params.p;
  const double n = static_cast<double>(led.params.n);
  const double r2 = led.r2;
  const double pj = std::pow(p, j - 1);

  LedgerClosedForms cf;
  cf.a = led.alpha * pj - (n + (r2 + 1.0) / (p - 1.0));
  cf.b = led.beta * pj - (r2 + 3.0) / (p - 1.0);

  // Exact solved recursion: log D_j = p^{j-1} log D_1
  //   + sum_{k=1}^{j-1} p^{j-1-k} [log C0 - log((r2+p b_k+2)(r2+p b_k+3))],
  // with b_k taken in closed form rather than replayed from the recursion.
  const double log_C0 = std::log(led.C0);
  double acc = 0.0;
  for (int k = 1; k <= j - 1; ++k) {
    const double b_k = led.beta * std::pow(p, k - 1) - (r2 + 3.0) / (p - 1.0);
    const double term =
        log_C0 - std::log((r2 + p * b_k + 2.0) * (r2 + p * b_k + 3.0));
    acc += term * std::pow(p, j - 1 - k);
  }
  const double log_D1 = led.log_D.empty()
                            ? std::log(led.C2) + p * std::log(led.params.eps)
                            : led.log_D[0];
  cf.log_D = pj * log_D1 + acc;

  // Tail-free exponential form: replaces the finite sum by -Sp_inf.  It under-
  // estimates log D_j once j clears the index where the tail bound kicks in.
  cf.log_D_lower = pj * (log_D1 - led.Sp_inf);
  return cf;
}

// Divergence functional of the ledger: J(t) = log D_1 - Sp_inf
//   - alpha log(1+t) + beta log(t - T0).  The sequence D_j (1+t)^{-a_j}
//   (t-T0)^{b_j} diverges wherever J(t) > its slack threshold.
inline double ledger_J(const IterationLedger& led, double t, double T0) {
  if (!(t > T0)) throw DomainError("ledger_J: requires t > T0");
  const double log_D1 = led.log_D.empty()
                            ? std::log(led.C2) + led.params.p * std::log(led.params.eps)
                            : led.log_D[0];
  return log_D1 - led.Sp_inf - led.alpha * std::log1p(t) +
         led.beta * std::log(t - T0);
}

inline BlowupTimeBound subcritical_blowup_time(const IterationLedger& led, double T0) {
  const double p = led.params.p;
  const double n = static_cast<double>(led.params.n);
  const double gam = exponents::gamma(p, n + led.params.mu1);
  if (gam <= 0.0)
    throw DomainError("subcritical_blowup_time: gamma(p, n+mu1) must be positive");
  if (!(T0 >= 0.0)) throw DomainError("subcritical_blowup_time: requires T0 >= 0");

  // beta - alpha = gamma/(2(p-1)) links the sequence growth gap to the
  // lifespan exponent; a mismatch means the ledger constants are corrupt.
  const double gap = led.beta - led.alpha;
  const double want = gam / (2.0 * (p - 1.0));
  if (std::fabs(gap - want) > 1e-9 * std::max(1.0, std::fabs(want)))
    throw AccuracyError("subcritical_blowup_time: beta - alpha != gamma/(2(p-1))");

  BlowupTimeBound out;
  out.T0 = T0;
  out.eps_term = led.C4 * std::pow(led.params.eps, -2.0 * p * (p - 1.0) / gam);
  out.time = std::max(T0 + out.eps_term, 2.0 * T0 + 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Critical-case comparison ODE in slow time tau = log(2+t).

struct CriticalOdeOptions {
  double tau_cap = 2.0e4;     // give up (no blow-up) beyond this tau
  double dt0 = 1e-3;          // initial step
  bool frozen_tau = false;    // evaluate the tau-coefficient at tau0 (testing aid)
  std::vector<double> thresholds = {1e6, 1e8, 1e10, 1e12};
};

struct CriticalOdeRun {
  double p = 0.0, C = 0.0, c0 = 0.0, eps = 0.0;
  double tau0 = 0.0;
  std::vector<std::array<double, 3>> trajectory;  // (tau, J, J')
  std::vector<ThresholdCrossing> crossings;
  double tau_star = 0.0;  // extrapolated divergence slow-time
  double t_star = 0.0;    // exp(tau_star) - 2
  std::size_t steps = 0;
};

// Integrates J'' = -2 J' + C tau^{1-p} J^p from tau0 = log 4 with
// J(tau0) = c0 eps^p tau0, J'(tau0) = c0 eps^p, holding the trajectory on
// the comparison floors J >= c0 eps^p tau, J' >= c0 eps^p (the free flow
// dips below them immediately for small eps, which is exactly the regime
// the floors are there to carry).  Blow-up is extrapolated from the
// threshold ladder with the local-rate basis M^{-(p-1)/2}.
inline CriticalOdeRun critical_ode_integrate(double p, double C, double c0, double eps,
                                             const CriticalOdeOptions& opt = {}) {
  if (p <= 1.0) throw DomainError("critical_ode_integrate: requires p > 1");
  if (!(C > 0.0) || !(c0 > 0.0) || !(eps > 0.0))
    throw DomainError("critical_ode_integrate: C, c0, eps must be positive");
  if (opt.thresholds.empty())
    throw DomainError("critical_ode_integrate: threshold ladder is empty");

  CriticalOdeRun run;
  run.p = p;
  run.C = C;
  run.c0 = c0;
  run.eps = eps;
  run.tau0 = std::log(4.0);

  std::vector<double> ladder = opt.thresholds;
  std::sort(ladder.begin(), ladder.end());
  const double top = ladder.back();

  const double floor_rate = c0 * std::pow(eps, p);  // J' floor; J floor is rate * tau
  double tau = run.tau0;
  double J = floor_rate * tau;
  double V = floor_rate;
  if (J >= ladder.front())
    throw DomainError("critical_ode_integrate: initial J already above the lowest threshold");

  const auto accel = [&](double tau_q, double J_q, double V_q) {
    const double coeff = opt.frozen_tau ? run.tau0 : tau_q;
    return -2.0 * V_q + C * std::pow(coeff, 1.0 - p) * std::pow(J_q, p);
  };

  run.trajectory.push_back({tau, J, V});
  std::size_t next_rung = 0;
  double dt = opt.dt0;

  while (tau < opt.tau_cap) {
    // Step-size control from the local curvature: |J''| dt^2 <= 1e-6 J.
    const double A0 = accel(tau, J, V);
    const double dt_max = 0.05 * tau;
    while (dt > dt_max || (std::fabs(A0) * dt * dt > 1e-6 * J && dt > 1e-12)) dt *= 0.5;
    if (std::fabs(A0) * dt * dt < 2.5e-7 * J && 2.0 * dt <= dt_max) dt *= 2.0;

    // Classic RK4 on (J, V).
    const double k1J = V, k1V = A0;
    const double k2J = V + 0.5 * dt * k1V,
                 k2V = accel(tau + 0.5 * dt, J + 0.5 * dt * k1J, V + 0.5 * dt * k1V);
    const double k3J = V + 0.5 * dt * k2V,
                 k3V = accel(tau + 0.5 * dt, J + 0.5 * dt * k2J, V + 0.5 * dt * k2V);
    const double k4J = V + dt * k3V,
                 k4V = accel(tau + dt, J + dt * k3J, V + dt * k3V);

    const double tau_new = tau + dt;
    double J_new = J + dt / 6.0 * (k1J + 2.0 * k2J + 2.0 * k3J + k4J);
    double V_new = V + dt / 6.0 * (k1V + 2.0 * k2V + 2.0 * k3V + k4V);
    if (!std::isfinite(J_new) || !std::isfinite(V_new)) break;

    // Comparison floors.
    J_new = std::max(J_new, floor_rate * tau_new);
    V_new = std::max(V_new, floor_rate);

    while (next_rung < ladder.size() && J_new >= ladder[next_rung]) {
      // log-space interpolation of the crossing time inside the step
      const double lo = std::max(J, floor_rate * tau);  // pre-step value
      double frac = 1.0;
      if (lo > 0.0 && J_new > lo)
        frac = (std::log(ladder[next_rung]) - std::log(lo)) /
               (std::log(J_new) - std::log(lo));
      run.crossings.push_back({ladder[next_rung], tau + frac * dt});
      ++next_rung;
    }

    tau = tau_new;
    J = J_new;
    V = V_new;
    ++run.steps;
    run.trajectory.push_back({tau, J, V});
    if (J >= top) break;
  }

  if (run.crossings.size() < 2 || run.crossings.back().threshold < top)
    throw NoBlowUp("critical_ode_integrate: trajectory stayed below the ladder up to tau_cap");

  run.tau_star = fit_blowup_time(run.crossings, p);
  run.t_star = std::exp(run.tau_star) - 2.0;
  return run;
}

// ---------------------------------------------------------------------------
// Lifespan scaling fits.

enum class ScalingMode { power_law, exponential };

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of y against log(eps), with y = log T (power_law: T ~ eps^slope)
// or y = log log T (exponential: log T ~ eps^slope).
inline ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points,
                              ScalingMode mode = ScalingMode::power_law) {
  if (points.size() < 3) throw DomainError("fit_scaling: need at least 3 points");
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& [eps, T] : points) {
    if (!(eps > 0.0)) throw DomainError("fit_scaling: eps must be positive");
    if (!(T > 0.0)) throw DomainError("fit_scaling: T must be positive");
    if (mode == ScalingMode::exponential && T <= 1.0)
      throw DomainError("fit_scaling: exponential mode needs T > 1");
    xs.push_back(std::log(eps));
    ys.push_back(mode == ScalingMode::exponential ? std::log(std::log(T)) : std::log(T));
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("fit_scaling: eps values must not all coincide");

  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = (syy == 0.0) ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace strausslab

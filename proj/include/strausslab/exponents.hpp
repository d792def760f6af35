#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "strausslab/errors.hpp"

// Critical-exponent bookkeeping for the damped wave model
//
//   u_tt - Lap u + mu1/(1+t) u_t + mu2sq/(1+t)^2 u = |u|^p,
//   u(0) = eps f, u_t(0) = eps g,
//
// whose effective spatial dimension is shifted by the damping strength.
// Everything in this header is a pure function of the parameters.

namespace strausslab {

/// Initial-data shape used by the solver; `bump` is the compactly supported
/// profile A (1 - (r/R)^2)^4 on r < R, `constant` is spatially flat (used by
/// the zero-dimensional ODE mode).
struct DataProfile {
  enum class Kind { bump, constant };
  Kind kind = Kind::bump;
  double amp_f = 1.0;
  double amp_g = 1.0;
};

struct ModelParams {
  int n = 1;           // space dimension, >= 1
  double mu1 = 2.0;    // dissipative coefficient, >= 0
  double mu2sq = 0.0;  // mass coefficient (the square), >= 0
  double p = 2.0;      // nonlinearity power, > 1
  double eps = 0.5;    // data size, > 0
  double R = 1.0;      // data support radius, > 0
  DataProfile profile{};

  void validate() const {
    if (n < 1) throw DomainError("ModelParams: n must be >= 1");
    if (!(mu1 >= 0.0)) throw DomainError("ModelParams: mu1 must be >= 0");
    if (!(mu2sq >= 0.0)) throw DomainError("ModelParams: mu2sq must be >= 0");
    if (!(p > 1.0)) throw DomainError("ModelParams: p must be > 1");
    if (!(eps > 0.0)) throw DomainError("ModelParams: eps must be > 0");
    if (!(R > 0.0)) throw DomainError("ModelParams: R must be > 0");
  }
};

namespace exponents {

/// delta = (mu1 - 1)^2 - 4 mu2sq; the discriminant steering the whole theory.
inline double delta(double mu1, double mu2sq) {
  return (mu1 - 1.0) * (mu1 - 1.0) - 4.0 * mu2sq;
}

/// gamma(p, r) = 2 + (r+1) p - (r-1) p^2 (positive iff p is Strauss-subcritical
/// in dimension r).
inline double gamma(double p, double r) {
  return 2.0 + (r + 1.0) * p - (r - 1.0) * p * p;
}

/// Strauss exponent: the positive root of gamma(p, r) = 0, r > 1.
inline double strauss(double r) {
  if (!(r > 1.0)) throw DomainError("strauss: requires r > 1");
  const double s = r + 1.0;
  return (s + std::sqrt(s * s + 8.0 * (r - 1.0))) / (2.0 * (r - 1.0));
}

/// Fujita exponent 1 + 2/n_eff.
inline double fujita(double n_eff) {
  if (!(n_eff > 0.0)) throw DomainError("fujita: requires n_eff > 0");
  return 1.0 + 2.0 / n_eff;
}

/// The damping strength at which the shifted Strauss exponent meets Fujita:
/// mu_star(n) = (n^2 + n + 2) / (n + 2).
inline double mu_star(double n) { return (n * n + n + 2.0) / (n + 2.0); }

/// Characteristic roots (r1, r2), r1 <= r2, of r^2 - (mu1-1) r + mu2sq = 0;
/// real iff delta >= 0.
struct Roots {
  double r1, r2;
};
inline Roots characteristic_roots(double mu1, double mu2sq) {
  const double d = delta(mu1, mu2sq);
  if (d < 0.0) throw DomainError("characteristic_roots: delta < 0, roots complex");
  const double sq = std::sqrt(d);
  return {(mu1 - 1.0 - sq) / 2.0, (mu1 - 1.0 + sq) / 2.0};
}

/// beta_q = (n - mu1 + 1)/2 - 1/q, the weight index attached to exponent q.
inline double beta_q(double n, double mu1, double q) {
  if (!(q > 0.0)) throw DomainError("beta_q: requires q > 0");
  return (n - mu1 + 1.0) / 2.0 - 1.0 / q;
}

enum class Regime {
  parabolic_like,
  wave_like_subcritical,
  wave_like_critical,
  supercritical_untreated,
};

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::parabolic_like: return "parabolic-like";
    case Regime::wave_like_subcritical: return "wave-like-subcritical";
    case Regime::wave_like_critical: return "wave-like-critical";
    case Regime::supercritical_untreated: return "supercritical-untreated";
  }
  return "?";
}

struct HypothesisFlags {
  bool thm_subcritical_ok = false;  // delta >= 0 and 1 < p < pS(n+mu1)
  bool thm_critical_ok = false;     // 0 <= delta < n^2, p = pS(n+mu1), p > 2/(n-sqrt(delta))
  bool beta_p_admissible = false;   // beta_p > (sqrt(delta)-mu1+1)/2
  bool beta_p_geq = false;          // beta_p >= 1 - mu1
};

struct ExponentReport {
  double delta = 0.0;
  double pS = 0.0;         // Strauss exponent of the shifted dimension; +inf if n+mu1 <= 1
  double pF_shifted = 0.0; // Fujita exponent of n + r1; NaN if n + r1 <= 0
  double gamma = 0.0;      // gamma(p, n + mu1)
  double r1 = 0.0, r2 = 0.0; // characteristic roots; NaN if delta < 0
  Regime regime = Regime::supercritical_untreated;
  HypothesisFlags flags{};
};

inline constexpr double kCriticalTol = 1e-9; // |p - pS| window treated as critical

/// Classify the model parameters.  Pure; never throws for params passing
/// ModelParams::validate (delta < 0 yields NaN roots, not an error).
inline ExponentReport classify(const ModelParams& mp) {
  mp.validate();
  ExponentReport rep;
  const double nd = static_cast<double>(mp.n);
  rep.delta = delta(mp.mu1, mp.mu2sq);
  const double r = nd + mp.mu1;
  rep.pS = r > 1.0 ? strauss(r) : std::numeric_limits<double>::infinity();
  rep.gamma = gamma(mp.p, r);
  if (rep.delta >= 0.0) {
    const Roots rt = characteristic_roots(mp.mu1, mp.mu2sq);
    rep.r1 = rt.r1;
    rep.r2 = rt.r2;
    const double n_eff = nd + rt.r1;
    rep.pF_shifted = n_eff > 0.0 ? fujita(n_eff) : std::numeric_limits<double>::quiet_NaN();
  } else {
    rep.r1 = rep.r2 = rep.pF_shifted = std::numeric_limits<double>::quiet_NaN();
  }

  const double sd = rep.delta >= 0.0 ? std::sqrt(rep.delta) : 0.0;
  const double bp = beta_q(nd, mp.mu1, mp.p);
  rep.flags.thm_subcritical_ok = rep.delta >= 0.0 && mp.p > 1.0 && mp.p < rep.pS;
  rep.flags.thm_critical_ok = rep.delta >= 0.0 && rep.delta < nd * nd &&
                              std::isfinite(rep.pS) &&
                              std::abs(mp.p - rep.pS) <= kCriticalTol &&
                              mp.p > 2.0 / (nd - sd);
  rep.flags.beta_p_admissible = rep.delta >= 0.0 && bp > (sd - mp.mu1 + 1.0) / 2.0;
  rep.flags.beta_p_geq = bp >= 1.0 - mp.mu1;

  // Precedence: the parabolic window is defined by delta alone; within the
  // wave-like window the critical tolerance band wins over the strict
  // subcritical comparison (the band exists because p can only be set equal
  // to pS up to rounding).
  if (rep.delta >= (nd + 1.0) * (nd + 1.0)) {
    rep.regime = Regime::parabolic_like;
  } else if (rep.flags.thm_critical_ok) {
    rep.regime = Regime::wave_like_critical;
  } else if (rep.flags.thm_subcritical_ok) {
    rep.regime = Regime::wave_like_subcritical;
  } else {
    rep.regime = Regime::supercritical_untreated;
  }
  return rep;
}

enum class LifespanCase { subcritical, critical };

/// Theoretical upper bound for the lifespan:
///   subcritical: C eps^{-2p(p-1)/gamma(p, n+mu1)},
///   critical:    exp(C eps^{-p(p-1)}).
/// Requires the matching hypothesis flag.
inline double lifespan_bound(const ModelParams& mp, double C, LifespanCase which) {
  const ExponentReport rep = classify(mp);
  if (which == LifespanCase::subcritical) {
    if (!rep.flags.thm_subcritical_ok)
      throw DomainError("lifespan_bound: subcritical hypotheses not satisfied");
    return C * std::pow(mp.eps, -2.0 * mp.p * (mp.p - 1.0) / rep.gamma);
  }
  if (!rep.flags.thm_critical_ok)
    throw DomainError("lifespan_bound: critical hypotheses not satisfied");
  return std::exp(C * std::pow(mp.eps, -mp.p * (mp.p - 1.0)));
}

} // namespace exponents
} // namespace strausslab

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "strausslab/errors.hpp"
#include "strausslab/exponents.hpp"
#include "strausslab/solver.hpp"
#include "strausslab/testfuncs.hpp"

// Time-dependent functionals of a solve trace -- averages of u against the
// test-function families -- together with the identity and inequality checks
// that certify a run numerically.  Everything here is a pure function of
// (trace, params): no state, repeated evaluation is bit-identical.

namespace strausslab {

struct BetaFunctionals {
  double beta = 0.0;
  std::vector<double> Gb; // \int |u|^p Phi_beta dx
  std::vector<double> Hb; // \int_0^t (t-s)(1+s) Gb(s) ds
  std::vector<double> Jb; // \int_0^t (2+s)^{-3} Hb(s) ds
};

struct FunctionalSeries {
  std::vector<double> times;
  std::vector<double> F;  // \int u psi dx   (psi = lambda(t) phi(r))
  std::vector<double> G;  // \int u dx
  std::vector<double> Lp; // \int |u|^p dx
  std::vector<BetaFunctionals> per_beta;
};

namespace detail {

// Composite Simpson over node values f(0..m) on spacing h; an odd trailing
// interval is closed with a trapezoid (the integrands here vanish at the cut,
// which sits two cells past the numerical support).
template <class NodeFn>
double simpson_cut(int m, double h, NodeFn&& f) {
  if (m <= 0) return 0.0;
  double s = 0.0;
  const int pairs = m / 2;
  for (int k = 0; k < pairs; ++k) {
    const int i = 2 * k;
    s += (f(i) + 4.0 * f(i + 1) + f(i + 2)) * (h / 3.0);
  }
  if (m % 2 == 1) s += 0.5 * (f(m - 1) + f(m)) * h;
  return s;
}

inline int support_cut(const std::vector<double>& u, int nr) {
  return std::min(nr, support_index(u) + 2);
}

// in-place cumulative trapezoid of y over (possibly nonuniform) times
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                                const std::vector<double>& y) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (y[k] + y[k - 1]) * (t[k] - t[k - 1]);
  return out;
}

// largest prefix of `t` with uniform spacing (needed by the finite
// differences in time); returns the number of usable samples
inline std::size_t uniform_prefix(const std::vector<double>& t) {
  if (t.size() < 2) return t.size();
  const double h = t[1] - t[0];
  std::size_t k = 1;
  while (k + 1 < t.size() && std::abs(t[k + 1] - t[k] - h) <= 1e-6 * h) ++k;
  return k + 1;
}

// fourth-order first/second derivatives of a uniformly sampled series at
// index k (needs k-2..k+2): Richardson over the h and 2h central stencils
inline double series_d1(const std::vector<double>& y, std::size_t k, double h) {
  const double d1h = (y[k + 1] - y[k - 1]) / (2.0 * h);
  const double d12h = (y[k + 2] - y[k - 2]) / (4.0 * h);
  return (4.0 * d1h - d12h) / 3.0;
}

inline double series_d2(const std::vector<double>& y, std::size_t k, double h) {
  const double d2h = (y[k + 1] - 2.0 * y[k] + y[k - 1]) / (h * h);
  const double d22h = (y[k + 2] - 2.0 * y[k] + y[k - 2]) / (4.0 * h * h);
  return (4.0 * d2h - d22h) / 3.0;
}

} // namespace detail

/// Sample F, G, Lp (and Gb/Hb/Jb for each member of `beta_family`) on the
/// trace snapshots.  Spatial integrals: composite Simpson with weight
/// omega_{n-1} r^{n-1} over the numerical support; time integrals for Hb and
/// Jb: composite trapezoid on the snapshot grid.
inline FunctionalSeries evaluate_functionals(
    const SolveTrace& trace, const RadialGrid& grid, const ModelParams& mp,
    const SubcriticalTestFn& sub,
    const std::vector<CriticalTestFn>& beta_family = {}) {
  if (trace.snapshots.size() < 2)
    throw DomainError("evaluate_functionals: need at least two snapshots");
  if (sub.n != mp.n || sub.mu1 != mp.mu1 || sub.mu2sq != mp.mu2sq)
    throw DomainError("evaluate_functionals: test function family does not "
                      "match the model parameters");
  for (const auto& tf : beta_family)
    if (tf.n != mp.n || tf.mu1 != mp.mu1 || tf.mu2sq != mp.mu2sq)
      throw DomainError("evaluate_functionals: test function family does not "
                        "match the model parameters");
  for (std::size_t k = 1; k < trace.snapshots.size(); ++k) {
    const double gap = trace.snapshots[k].t - trace.snapshots[k - 1].t;
    if (gap > 2.0 * grid.dr)
      throw DomainError("evaluate_functionals: snapshots too sparse "
                        "(need snapshot spacing <= dr)");
  }

  const double omega = sphere_area(mp.n);
  const bool p2 = mp.p == 2.0;

  std::vector<double> wr(grid.nr + 1), phi(grid.nr + 1);
  for (int i = 0; i <= grid.nr; ++i) {
    wr[i] = std::pow(grid.r(i), mp.n - 1.0);
    phi[i] = sub.phi(grid.r(i));
  }

  FunctionalSeries fs;
  const std::size_t K = trace.snapshots.size();
  fs.times.reserve(K);
  fs.F.reserve(K);
  fs.G.reserve(K);
  fs.Lp.reserve(K);
  fs.per_beta.resize(beta_family.size());
  for (std::size_t b = 0; b < beta_family.size(); ++b) {
    fs.per_beta[b].beta = beta_family[b].beta;
    fs.per_beta[b].Gb.reserve(K);
  }

  for (const Snapshot& snap : trace.snapshots) {
    const std::vector<double>& u = snap.u;
    const double t = snap.t;
    const int cut = detail::support_cut(u, grid.nr);
    const double lam = sub.lambda(t);

    fs.times.push_back(t);
    fs.F.push_back(omega * lam *
                   detail::simpson_cut(cut, grid.dr, [&](int i) {
                     return u[i] * phi[i] * wr[i];
                   }));
    fs.G.push_back(omega * detail::simpson_cut(cut, grid.dr, [&](int i) {
                     return u[i] * wr[i];
                   }));
    fs.Lp.push_back(omega * detail::simpson_cut(cut, grid.dr, [&](int i) {
                      return detail::power_source(u[i], mp.p, p2) * wr[i];
                    }));
    for (std::size_t b = 0; b < beta_family.size(); ++b) {
      const CriticalTestFn& tf = beta_family[b];
      fs.per_beta[b].Gb.push_back(
          omega * detail::simpson_cut(cut, grid.dr, [&](int i) {
            return detail::power_source(u[i], mp.p, p2) * tf.Phi(t, grid.r(i)) * wr[i];
          }));
    }
  }

  // Hb by the exact (t - s) kernel on the sample grid, Jb by a cumulative
  // trapezoid on top of it; both start from 0 by construction.
  for (auto& bf : fs.per_beta) {
    bf.Hb.assign(K, 0.0);
    for (std::size_t k = 1; k < K; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j + 1 <= k; ++j) {
        const double yj = (fs.times[k] - fs.times[j]) * (1.0 + fs.times[j]) * bf.Gb[j];
        const double yj1 =
            (fs.times[k] - fs.times[j + 1]) * (1.0 + fs.times[j + 1]) * bf.Gb[j + 1];
        acc += 0.5 * (yj + yj1) * (fs.times[j + 1] - fs.times[j]);
      }
      bf.Hb[k] = acc;
    }
    std::vector<double> integrand(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double d = 2.0 + fs.times[k];
      integrand[k] = bf.Hb[k] / (d * d * d);
    }
    bf.Jb = detail::cumulative_trapezoid(fs.times, integrand);
  }
  return fs;
}

struct ResidualSeries {
  std::vector<double> times;
  std::vector<double> residual;
  double rel_l2 = 0.0;
};

/// Residual of the averaged dynamics
///   G'' + mu1/(1+t) G' + mu2sq/(1+t)^2 G = \int |u|^p dx,
/// with G', G'' from fourth-order finite differences on the uniformly spaced
/// prefix of the series.  rel_l2 is the L2 residual over the term scale.
/// `with_source` = false checks the zero-right-side form for runs with the
/// nonlinearity disabled.
inline ResidualSeries check_g_dynamics(const FunctionalSeries& fs,
                                       const ModelParams& mp,
                                       bool with_source = true) {
  const std::size_t K = detail::uniform_prefix(fs.times);
  if (K < 6)
    throw DomainError("check_g_dynamics: need at least six uniformly spaced samples");
  const double h = fs.times[1] - fs.times[0];

  ResidualSeries rs;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 2; k + 2 < K; ++k) {
    const double t = fs.times[k];
    const double d1 = detail::series_d1(fs.G, k, h);
    const double d2 = detail::series_d2(fs.G, k, h);
    const double damping = mp.mu1 / (1.0 + t) * d1;
    const double mass = mp.mu2sq / ((1.0 + t) * (1.0 + t)) * fs.G[k];
    const double source = with_source ? fs.Lp[k] : 0.0;
    const double res = d2 + damping + mass - source;
    const double scale = std::abs(d2) + std::abs(damping) + std::abs(mass) + std::abs(source);
    rs.times.push_back(t);
    rs.residual.push_back(res);
    num += res * res;
    den += scale * scale;
  }
  rs.rel_l2 = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return rs;
}

struct InequalitySeries {
  std::vector<double> times;
  std::vector<char> ok;         // 1 where the inequality holds
  std::vector<char> degenerate; // 1 where both sides vanish identically
  std::size_t checked = 0;      // non-degenerate samples
  bool all_ok = true;           // over non-degenerate samples
};

/// Per-sample check of
///   G'(t) + r1/(1+t) G(t) > (1+t)^{-r2-1} \int_0^t (1+s)^{r2+1} Lp(s) ds
/// with the characteristic roots r1 <= r2 of the damping/mass pair.  A
/// relative slack of 1e-10 absorbs rounding; samples with both sides exactly
/// zero are flagged degenerate instead of failing.
inline InequalitySeries check_key_inequality(const FunctionalSeries& fs,
                                             const ModelParams& mp) {
  const exponents::Roots roots = exponents::characteristic_roots(mp.mu1, mp.mu2sq);
  const std::size_t K = detail::uniform_prefix(fs.times);
  if (K < 6)
    throw DomainError("check_key_inequality: need at least six uniformly spaced samples");
  const double h = fs.times[1] - fs.times[0];

  std::vector<double> weighted(K);
  for (std::size_t k = 0; k < K; ++k)
    weighted[k] = std::pow(1.0 + fs.times[k], roots.r2 + 1.0) * fs.Lp[k];
  std::vector<double> times_prefix(fs.times.begin(), fs.times.begin() + K);
  const std::vector<double> memory = detail::cumulative_trapezoid(times_prefix, weighted);

  InequalitySeries out;
  for (std::size_t k = 2; k + 2 < K; ++k) {
    const double t = fs.times[k];
    const double lhs = detail::series_d1(fs.G, k, h) + roots.r1 / (1.0 + t) * fs.G[k];
    const double rhs = std::pow(1.0 + t, -roots.r2 - 1.0) * memory[k];
    out.times.push_back(t);
    if (lhs == 0.0 && rhs == 0.0) {
      out.ok.push_back(0);
      out.degenerate.push_back(1);
      continue;
    }
    const bool holds = lhs > rhs - 1e-10 * (std::abs(lhs) + std::abs(rhs));
    out.ok.push_back(holds ? 1 : 0);
    out.degenerate.push_back(0);
    ++out.checked;
    if (!holds) out.all_ok = false;
  }
  return out;
}

struct PrioriBoundResult {
  double C1_fit = 0.0;
  bool ok = false;
  bool degenerate = false; // zero solution: nothing to bound
  bool f_nonneg = true;    // F(t) >= 0 at every sample
  bool holder_ok = true;   // Lp * (\int psi^{p'})^{p-1} >= |F|^p pointwise
  double decay_power = 0.0;
};

/// Fit the best constant in  Lp(t) >= C1 eps^p (1+t)^{n-1-(n+mu1-1)p/2}  over
/// t in [T0, end], and verify the two ingredients behind it: nonnegativity of
/// F and the Hoelder split of F against the psi mass.
inline PrioriBoundResult check_priori_bound(const FunctionalSeries& fs,
                                            const ModelParams& mp,
                                            const SubcriticalTestFn& sub,
                                            double T0 = 5.0) {
  PrioriBoundResult out;
  out.decay_power = mp.n - 1.0 - (mp.n + mp.mu1 - 1.0) * mp.p / 2.0;

  double fmax = 0.0;
  for (double v : fs.F) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0.0) {
    out.degenerate = true;
    return out;
  }

  for (std::size_t k = 0; k < fs.times.size(); ++k) {
    if (fs.F[k] < -1e-10 * fmax) out.f_nonneg = false;
    const double mass = sub.psi_lp_norm_bound(fs.times[k], mp.p, mp.R).first;
    const double lhs = fs.Lp[k] * std::pow(mass, mp.p - 1.0);
    const double rhs = std::pow(std::abs(fs.F[k]), mp.p);
    if (lhs < rhs * (1.0 - 1e-10)) out.holder_ok = false;
  }

  double c1 = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (std::size_t k = 0; k < fs.times.size(); ++k) {
    if (fs.times[k] < T0) continue;
    const double envelope =
        std::pow(mp.eps, mp.p) * std::pow(1.0 + fs.times[k], out.decay_power);
    c1 = std::min(c1, fs.Lp[k] / envelope);
    ++used;
  }
  if (used == 0)
    throw DomainError("check_priori_bound: no samples at or beyond T0");
  out.C1_fit = c1;
  out.ok = out.C1_fit > 0.0 && out.f_nonneg && out.holder_ok;
  return out;
}

/// Per-sample check of  (1+t)^2 Jb(t) <= 1/2 \int_0^t (t-s)^2 Gb(s) ds.
inline InequalitySeries check_Jbeta_lemma(const FunctionalSeries& fs,
                                          std::size_t beta_index = 0) {
  if (beta_index >= fs.per_beta.size())
    throw DomainError("check_Jbeta_lemma: no functional series for that beta");
  const BetaFunctionals& bf = fs.per_beta[beta_index];

  InequalitySeries out;
  for (std::size_t k = 0; k < fs.times.size(); ++k) {
    const double t = fs.times[k];
    double rhs = 0.0;
    for (std::size_t j = 0; j + 1 <= k; ++j) {
      const double yj = (t - fs.times[j]) * (t - fs.times[j]) * bf.Gb[j];
      const double yj1 = (t - fs.times[j + 1]) * (t - fs.times[j + 1]) * bf.Gb[j + 1];
      rhs += 0.25 * (yj + yj1) * (fs.times[j + 1] - fs.times[j]);
    }
    const double lhs = (1.0 + t) * (1.0 + t) * bf.Jb[k];
    out.times.push_back(t);
    if (lhs == 0.0 && rhs == 0.0) {
      out.ok.push_back(1); // 0 <= 0 holds; still flag the degeneracy
      out.degenerate.push_back(1);
      continue;
    }
    const bool holds = lhs <= rhs + 1e-10 * (std::abs(lhs) + std::abs(rhs));
    out.ok.push_back(holds ? 1 : 0);
    out.degenerate.push_back(0);
    ++out.checked;
    if (!holds) out.all_ok = false;
  }
  return out;
}

struct IdentityResidual {
  std::vector<double> times;
  std::vector<double> residual; // |lhs - rhs| / (largest term), per sample
  double max_residual = 0.0;
};

/// Residual of the exact balance satisfied by weak solutions against Phi_beta:
///   eps E0 + eps E1 t + \int_0^t (t-s) Gb(s) ds
///     = \int u Phi_beta dx + \int_0^t (1+s)^{-beta} \int u psitilde_beta dx ds.
/// `with_source` drops the Gb term for runs with the nonlinearity disabled.
inline IdentityResidual check_fundamental_identity(const SolveTrace& trace,
                                                   const RadialGrid& grid,
                                                   const ModelParams& mp,
                                                   const CriticalTestFn& tf,
                                                   bool with_source = true) {
  if (mp.R >= 1.0)
    throw DomainError("check_fundamental_identity: needs data support R < 1");
  if (tf.beta < 1.0 - mp.mu1)
    throw DomainError("check_fundamental_identity: needs beta >= 1 - mu1");
  if (trace.snapshots.size() < 2 || trace.snapshots.front().t != 0.0)
    throw DomainError("check_fundamental_identity: trace must carry snapshots "
                      "from t = 0");

  const double omega = sphere_area(mp.n);
  const bool p2 = mp.p == 2.0;
  const auto [E0, E1] = tf.data_energies(
      [&](double r) { return profile_f(mp, r); },
      [&](double r) { return profile_g(mp, r); }, mp.R);

  const std::size_t K = trace.snapshots.size();
  std::vector<double> times(K), Gb(K, 0.0), tilde(K), phi_term(K);
  std::vector<double> wr(grid.nr + 1);
  for (int i = 0; i <= grid.nr; ++i) wr[i] = std::pow(grid.r(i), mp.n - 1.0);

  for (std::size_t k = 0; k < K; ++k) {
    const Snapshot& snap = trace.snapshots[k];
    const double t = snap.t;
    const double s1 = 1.0 + t;
    const int cut = detail::support_cut(snap.u, grid.nr);
    times[k] = t;
    if (with_source)
      Gb[k] = omega * detail::simpson_cut(cut, grid.dr, [&](int i) {
                return detail::power_source(snap.u[i], mp.p, p2) *
                       tf.Phi(t, grid.r(i)) * wr[i];
              });
    phi_term[k] = omega * detail::simpson_cut(cut, grid.dr, [&](int i) {
                    return snap.u[i] * tf.Phi(t, grid.r(i)) * wr[i];
                  });
    tilde[k] = std::pow(s1, -tf.beta) * omega *
               detail::simpson_cut(cut, grid.dr, [&](int i) {
                 const double z = grid.r(i) / s1;
                 return snap.u[i] * tf.psi_tilde(z * z) * wr[i];
               });
  }
  const std::vector<double> tilde_cum = detail::cumulative_trapezoid(times, tilde);

  IdentityResidual out;
  out.times = times;
  out.residual.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double t = times[k];
    double source_term = 0.0;
    for (std::size_t j = 0; j + 1 <= k; ++j)
      source_term += 0.5 * ((t - times[j]) * Gb[j] + (t - times[j + 1]) * Gb[j + 1]) *
                     (times[j + 1] - times[j]);
    const double terms[5] = {mp.eps * E0, mp.eps * E1 * t, source_term,
                             phi_term[k], tilde_cum[k]};
    const double lhs = terms[0] + terms[1] + terms[2];
    const double rhs = terms[3] + terms[4];
    double scale = 0.0;
    for (double v : terms) scale = std::max(scale, std::abs(v));
    out.residual[k] = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
    out.max_residual = std::max(out.max_residual, out.residual[k]);
  }
  return out;
}

} // namespace strausslab

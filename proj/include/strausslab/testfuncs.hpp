#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "strausslab/errors.hpp"
#include "strausslab/exponents.hpp"
#include "strausslab/quadrature.hpp"
#include "strausslab/specfun.hpp"

// Test-function layer: the time weight lambda, the Laplacian eigenfunction
// phi, the hypergeometric family Phi_beta, and the data functionals built
// from them (E0, E1, C_{f,g}).  Everything is immutable after construction
// and evaluation is pure, so instances can be shared across threads.

namespace strausslab {

/// omega_{n-1}: surface measure of the unit sphere in R^n (2 for n = 1).
inline double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Default compactly supported radial bump amp * (1 - (r/R)^2)^4 on [0, R);
/// vanishes to fourth order at the support edge.
inline double bump_profile(double r, double R, double amp) {
  r = std::abs(r);
  if (r >= R) return 0.0;
  const double q = 1.0 - (r / R) * (r / R);
  const double q2 = q * q;
  return amp * q2 * q2;
}

/// Radial value of the f-profile (no epsilon factor; the data are eps * f).
inline double profile_f(const ModelParams& m, double r) {
  switch (m.profile.kind) {
    case DataProfile::Kind::bump: return bump_profile(r, m.R, m.profile.amp_f);
    case DataProfile::Kind::constant: return m.profile.amp_f;
  }
  return 0.0;
}

/// Radial value of the g-profile.
inline double profile_g(const ModelParams& m, double r) {
  switch (m.profile.kind) {
    case DataProfile::Kind::bump: return bump_profile(r, m.R, m.profile.amp_g);
    case DataProfile::Kind::constant: return m.profile.amp_g;
  }
  return 0.0;
}

/// Positive radial eigenfunction of the Laplacian, Delta phi = phi:
///   n = 1:  e^r + e^{-r},
///   n >= 2: (2 pi)^{n/2} r^{1-n/2} I_{n/2-1}(r),
/// normalized so phi(0) = omega_{n-1}.  Grows like r^{-(n-1)/2} e^r.
inline double phi_fn(double r, int n) {
  if (r < 0.0) throw DomainError("phi_fn: r must be >= 0");
  if (n == 1) return std::exp(r) + std::exp(-r);
  if (r == 0.0) return sphere_area(n);
  return std::pow(2.0 * std::numbers::pi, 0.5 * n) * std::pow(r, 1.0 - 0.5 * n) *
         specfun::bessel_i(0.5 * n - 1.0, r);
}

/// Residual of phi'' + (n-1)/r phi' - phi = 0 at plain central-difference
/// step h (second-order accurate), relative to phi.
inline double phi_radial_laplace_residual_step(double r, int n, double h) {
  if (!(r > 0.0 && h > 0.0 && h < r)) {
    throw DomainError("phi_radial_laplace_residual_step: need 0 < h < r");
  }
  const double v = phi_fn(r, n);
  const double up = phi_fn(r + h, n), dn = phi_fn(r - h, n);
  const double d1 = (up - dn) / (2.0 * h);
  const double d2 = (up - 2.0 * v + dn) / (h * h);
  return std::abs(d2 + (n - 1.0) / r * d1 - v) / v;
}

/// Richardson-extrapolated (three step levels) variant of the phi residual.
inline double phi_radial_laplace_residual(double r, int n) {
  if (!(r > 0.0)) throw DomainError("phi_radial_laplace_residual: r must be > 0");
  const double h = std::min(0.01 * (1.0 + r), 0.5 * r);
  auto f = [n](double x) { return phi_fn(x, n); };
  const double v = phi_fn(r, n);
  const double d1 = quad::derivative1_richardson(f, r, h);
  const double d2 = quad::derivative2_richardson(f, r, h);
  return std::abs(d2 + (n - 1.0) / r * d1 - v) / v;
}

/// Residual of the lambda equation
///   (1+t)^2 y'' - mu1 (1+t) y' + (mu1 + mu2sq - (1+t)^2) y = 0
/// for an arbitrary candidate y (so deliberately wrong candidates can be fed
/// through the same detector).  Derivatives are Richardson-extrapolated
/// central differences at base step h; the residual is normalized by
/// (1+t)^2 |y(t)|.
template <class F>
double lambda_ode_residual_of(F&& y, double t, double mu1, double mu2sq, double h) {
  const double s = 1.0 + t;
  const double v = y(t);
  const double d1 = quad::derivative1_richardson(y, t, h);
  const double d2 = quad::derivative2_richardson(y, t, h);
  const double res = s * s * d2 - mu1 * s * d1 + (mu1 + mu2sq - s * s) * v;
  return std::abs(res) / (s * s * std::abs(v));
}

/// Time weight lambda(t) = (1+t)^{(mu1+1)/2} K_{sqrt(delta)/2}(1+t) and the
/// separated test function psi(t, r) = lambda(t) phi(r).  Requires delta >= 0
/// (real Bessel order); lambda is positive and decays like e^{-t}.
struct SubcriticalTestFn {
  int n;
  double mu1, mu2sq, delta;
  double nu; // Bessel order sqrt(delta)/2

  SubcriticalTestFn(int n_, double mu1_, double mu2sq_)
      : n(n_), mu1(mu1_), mu2sq(mu2sq_), delta(exponents::delta(mu1_, mu2sq_)),
        nu(0.0) {
    if (n < 1) throw DomainError("SubcriticalTestFn: n must be >= 1");
    if (delta < 0.0)
      throw DomainError("SubcriticalTestFn: delta < 0 (complex Bessel order)");
    nu = 0.5 * std::sqrt(delta);
  }
  explicit SubcriticalTestFn(const ModelParams& m)
      : SubcriticalTestFn(m.n, m.mu1, m.mu2sq) {}

  double lambda(double t) const {
    const double s = 1.0 + t;
    return std::pow(s, 0.5 * (mu1 + 1.0)) * specfun::bessel_k(nu, s);
  }

  /// Closed form: (mu1+1+sqrt(delta))/2 (1+t)^{(mu1-1)/2} K_nu(1+t)
  ///              - (1+t)^{(mu1+1)/2} K_{nu+1}(1+t).
  double lambda_prime(double t) const {
    const double s = 1.0 + t;
    return 0.5 * (mu1 + 1.0 + std::sqrt(delta)) * std::pow(s, 0.5 * (mu1 - 1.0)) *
               specfun::bessel_k(nu, s) -
           std::pow(s, 0.5 * (mu1 + 1.0)) * specfun::bessel_k(nu + 1.0, s);
  }

  double phi(double r) const { return phi_fn(r, n); }
  double psi(double t, double r) const { return lambda(t) * phi(r); }

  double lambda_ode_residual(double t) const {
    return lambda_ode_residual_of([this](double s) { return lambda(s); }, t, mu1,
                                  mu2sq, 0.01 * (1.0 + t));
  }

  /// Plain second-order central differences at fixed step h; halving h must
  /// cut this roughly 4x while truncation error dominates roundoff.
  double lambda_ode_residual_step(double t, double h) const {
    const double s = 1.0 + t;
    const double v = lambda(t);
    const double up = lambda(t + h), dn = lambda(t - h);
    const double d1 = (up - dn) / (2.0 * h);
    const double d2 = (up - 2.0 * v + dn) / (h * h);
    const double res = s * s * d2 - mu1 * s * d1 + (mu1 + mu2sq - s * s) * v;
    return std::abs(res) / (s * s * std::abs(v));
  }

  /// L^{p'} control of psi over the forward ball {|x| <= t+R}, p' = p/(p-1):
  ///   lhs = omega_{n-1} lambda(t)^{p'} int_0^{t+R} phi(r)^{p'} r^{n-1} dr,
  ///   rhs = C (1+t)^{n-1 + ((mu1+1)/2 - (n-1)/2) p'} e^{p'(t+R)} K_nu(1+t)^{p'},
  /// with C calibrated at t = 1 (slight headroom) so rhs(1) >= lhs(1); the
  /// bound lhs <= rhs then holds for t >= 1.
  std::pair<double, double> psi_lp_norm_bound(double t, double p, double R) const {
    if (!(t >= 0.0)) throw DomainError("psi_lp_norm_bound: t must be >= 0");
    if (!(p > 1.0)) throw DomainError("psi_lp_norm_bound: p must be > 1");
    if (!(R > 0.0)) throw DomainError("psi_lp_norm_bound: R must be > 0");
    const double pp = p / (p - 1.0);
    auto lhs_at = [&](double tt) {
      auto integrand = [&](double r) {
        return std::pow(phi_fn(r, n), pp) * std::pow(r, n - 1.0);
      };
      return sphere_area(n) * std::pow(lambda(tt), pp) *
             quad::simpson_doubling(integrand, 0.0, tt + R);
    };
    auto raw_at = [&](double tt) {
      const double s = 1.0 + tt;
      return std::pow(s, n - 1.0 + (0.5 * (mu1 + 1.0) - 0.5 * (n - 1.0)) * pp) *
             std::exp(pp * (tt + R)) * std::pow(specfun::bessel_k(nu, s), pp);
    };
    const double C = lhs_at(1.0) / raw_at(1.0) * (1.0 + 1e-12);
    return {lhs_at(t), C * raw_at(t)};
  }

  /// C_{f,g} = int (g lambda(0) + (mu1 lambda(0) - lambda'(0)) f) phi dx over
  /// B_R.  The data must satisfy the sign condition
  ///   f >= 0  and  g + ((mu1 - 1 - sqrt(delta))/2) f >= 0,
  /// checked on a uniform sample of [0, R]; positive for nontrivial data.
  template <class F, class G>
  double c_fg(F&& f, G&& g, double R) const {
    if (!(R > 0.0)) throw DomainError("c_fg: R must be > 0");
    const double k = 0.5 * (mu1 - 1.0 - std::sqrt(delta));
    for (int i = 0; i <= 512; ++i) {
      const double r = R * i / 512.0;
      const double fv = f(r), gv = g(r);
      const double tol = 1e-12 * (std::abs(fv) + std::abs(gv));
      if (fv < -tol || gv + k * fv < -tol)
        throw DomainError("c_fg: data violate the sign condition "
                          "f >= 0, g + ((mu1-1-sqrt(delta))/2) f >= 0");
    }
    const double l0 = lambda(0.0), lp0 = lambda_prime(0.0);
    auto integrand = [&](double r) {
      return (g(r) * l0 + (mu1 * l0 - lp0) * f(r)) * phi_fn(r, n) *
             std::pow(r, n - 1.0);
    };
    return sphere_area(n) * quad::simpson_doubling(integrand, 0.0, R);
  }
};

/// Hypergeometric test-function family
///   Phi_beta(t, r) = (1+t)^{1-beta} psi_beta(r^2/(1+t)^2),
///   psi_beta(z)    = F(a, b; n/2; z),
/// with (a, b) attached to beta as in HypParams.  The weight index beta is
/// admissible in the open window ((sqrt(delta)-mu1+1)/2, (n-mu1+1)/2), which
/// is nonempty iff delta < n^2.  The public constructor enforces strict
/// admissibility (needed by the positivity/band estimates); `unchecked`
/// skips the window check, since the ansatz solves the adjoint equation for
/// any beta with delta >= 0.
struct CriticalTestFn {
  int n;
  double mu1, mu2sq, beta, delta;
  specfun::HypParams hp;

  CriticalTestFn(int n_, double mu1_, double mu2sq_, double beta_)
      : CriticalTestFn(n_, mu1_, mu2sq_, beta_, true) {}

  static CriticalTestFn unchecked(int n_, double mu1_, double mu2sq_, double beta_) {
    return CriticalTestFn(n_, mu1_, mu2sq_, beta_, false);
  }

  double admissible_lo() const { return 0.5 * (std::sqrt(delta) - mu1 + 1.0); }
  double admissible_hi() const { return 0.5 * (n - mu1 + 1.0); }

  double psi(double z) const { return specfun::hyp2f1(hp.a, hp.b, hp.c, z); }
  double psi_prime(double z) const {
    return specfun::hyp2f1_prime(hp.a, hp.b, hp.c, z);
  }
  double psi_second(double z) const {
    return specfun::hyp2f1_second(hp.a, hp.b, hp.c, z);
  }

  /// psi~(z) = (2 beta + mu1 - 2) psi(z) + 4 z psi'(z); psi~(0) = 2 beta + mu1 - 2.
  double psi_tilde(double z) const {
    return (2.0 * beta + mu1 - 2.0) * psi(z) + 4.0 * z * psi_prime(z);
  }

  /// Defined strictly inside the light cone |r| < 1+t; even in r, so
  /// finite-difference stencils may cross r = 0.
  double Phi(double t, double r) const {
    const double s = 1.0 + t;
    if (!(std::abs(r) < s)) throw DomainError("CriticalTestFn::Phi: requires |r| < 1+t");
    const double z = (r * r) / (s * s);
    return std::pow(s, 1.0 - beta) * psi(z);
  }

  /// Residual of the hypergeometric equation
  ///   z(1-z) psi'' + (n/2 - (beta + 1/2 + mu1/2) z) psi'
  ///                - ((beta(beta+mu1-1) + mu2sq)/4) psi = 0,
  /// relative to the sum of term magnitudes.  The derivatives are exact
  /// series, so only roundoff remains.
  double hypergeometric_ode_residual(double z) const {
    const double t1 = z * (1.0 - z) * psi_second(z);
    const double t2 = (0.5 * n - (beta + 0.5 + 0.5 * mu1) * z) * psi_prime(z);
    const double t3 = -0.25 * (beta * (beta + mu1 - 1.0) + mu2sq) * psi(z);
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    return std::abs(t1 + t2 + t3) / (scale > 0.0 ? scale : 1.0);
  }

  /// Residual of the adjoint equation
  ///   Phi_tt - Phi_rr - (n-1)/r Phi_r - mu1 (Phi/(1+t))_t + mu2sq Phi/(1+t)^2
  /// by Richardson-extrapolated central differences, normalized by
  /// |Phi| (1+t)^{-2}.  The radial part degenerates to n Phi_rr at r = 0.
  /// Reliable for r/(1+t) <= 0.95 or so; the contract is the band <= 0.9.
  double adjoint_residual(double t, double r) const {
    const double s = 1.0 + t;
    const double h = std::min(0.02 * s, 0.45 * (s - std::abs(r)));
    auto ft = [&](double tt) { return Phi(tt, r); };
    auto fr = [&](double rr) { return Phi(t, rr); };
    const double v = Phi(t, r);
    const double ptt = quad::derivative2_richardson(ft, t, h);
    const double pt = quad::derivative1_richardson(ft, t, h);
    const double prr = quad::derivative2_richardson(fr, r, h);
    double lap;
    if (r == 0.0) {
      lap = n * prr;
    } else {
      lap = prr + (n - 1.0) / r * quad::derivative1_richardson(fr, r, h);
    }
    const double res = ptt - lap - mu1 * (pt / s - v / (s * s)) + mu2sq * v / (s * s);
    return std::abs(res) * s * s / std::abs(v);
  }

  /// Plain second-order variant at fixed stencil step h (for convergence-order
  /// checks).
  double adjoint_residual_step(double t, double r, double h) const {
    const double s = 1.0 + t;
    const double v = Phi(t, r);
    const double tup = Phi(t + h, r), tdn = Phi(t - h, r);
    const double rup = Phi(t, r + h), rdn = Phi(t, r - h);
    const double ptt = (tup - 2.0 * v + tdn) / (h * h);
    const double pt = (tup - tdn) / (2.0 * h);
    const double prr = (rup - 2.0 * v + rdn) / (h * h);
    double lap;
    if (r == 0.0) {
      lap = n * prr;
    } else {
      lap = prr + (n - 1.0) / r * (rup - rdn) / (2.0 * h);
    }
    const double res = ptt - lap - mu1 * (pt / s - v / (s * s)) + mu2sq * v / (s * s);
    return std::abs(res) * s * s / std::abs(v);
  }

  /// Data functionals for radial profiles supported in B_R, R < 1:
  ///   E0 = int f psi(|x|^2) dx,
  ///   E1 = int (g psi + f((beta - 1 + mu1) psi + 2|x|^2 psi')) dx.
  /// Both positive for nonnegative nontrivial data when beta >= 1 - mu1.
  template <class F, class G>
  std::pair<double, double> data_energies(F&& f, G&& g, double R) const {
    if (!(R > 0.0)) throw DomainError("data_energies: R must be > 0");
    if (R >= 1.0)
      throw DomainError(
          "data_energies: support must lie strictly inside the unit ball (R < 1)");
    const double w = sphere_area(n);
    auto e0i = [&](double r) { return f(r) * psi(r * r) * std::pow(r, n - 1.0); };
    auto e1i = [&](double r) {
      return (g(r) * psi(r * r) +
              f(r) * ((beta - 1.0 + mu1) * psi(r * r) +
                      2.0 * r * r * psi_prime(r * r))) *
             std::pow(r, n - 1.0);
    };
    return {w * quad::simpson_doubling(e0i, 0.0, R),
            w * quad::simpson_doubling(e1i, 0.0, R)};
  }

 private:
  CriticalTestFn(int n_, double mu1_, double mu2sq_, double beta_, bool strict)
      : n(n_), mu1(mu1_), mu2sq(mu2sq_), beta(beta_),
        delta(exponents::delta(mu1_, mu2sq_)),
        hp(specfun::HypParams::from_beta(n_, mu1_, mu2sq_, beta_)) {
    if (n < 1) throw DomainError("CriticalTestFn: n must be >= 1");
    if (strict) {
      if (!(delta < static_cast<double>(n) * n))
        throw DomainError("CriticalTestFn: delta >= n^2 leaves no admissible beta");
      if (!(beta > admissible_lo() && beta < admissible_hi()))
        throw DomainError("CriticalTestFn: beta outside the admissible window");
    }
  }
};

} // namespace strausslab

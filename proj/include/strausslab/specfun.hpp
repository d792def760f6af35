#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "strausslab/errors.hpp"
#include "strausslab/quadrature.hpp"

// Special functions needed by the test-function layer: modified Bessel
// functions K_nu and I_nu and the Gauss hypergeometric series.  All routines
// are self-contained; no external special-function library is involved, so
// the quadrature/series recipes below are the single source of truth and are
// cross-checked in the tests against closed forms and independent oracles.

namespace strausslab::specfun {

/// Hypergeometric parameter pair attached to a weight index beta:
///   a = beta/2 + (mu1-1)/4 + sqrt(delta)/4,
///   b = beta/2 + (mu1-1)/4 - sqrt(delta)/4,   c = n/2,
/// so that a+b+1 = beta + 1/2 + mu1/2 and a*b = (beta(beta+mu1-1)+mu2sq)/4.
struct HypParams {
  double a, b, c;

  static HypParams from_beta(int n, double mu1, double mu2sq, double beta) {
    const double d = (mu1 - 1.0) * (mu1 - 1.0) - 4.0 * mu2sq;
    if (d < 0.0) throw DomainError("HypParams: delta < 0");
    const double sq = std::sqrt(d);
    const double c = 0.5 * n;
    if (c <= 0.0) throw DomainError("HypParams: c = n/2 must be positive");
    return {beta / 2.0 + (mu1 - 1.0) / 4.0 + sq / 4.0,
            beta / 2.0 + (mu1 - 1.0) / 4.0 - sq / 4.0, c};
  }
};

/// Rising factorial (m)_k = m (m+1) ... (m+k-1); (m)_0 = 1.
inline double pochhammer(double m, int k) {
  if (k < 0) throw DomainError("pochhammer: k must be >= 0");
  double acc = 1.0;
  for (int i = 0; i < k; ++i) acc *= m + i;
  return acc;
}

/// Modified Bessel function of the second kind,
///   K_nu(t) = int_0^inf exp(-t cosh z) cosh(nu z) dz,  t > 0.
///
/// Composite Gauss-Legendre on [0, z_max] with panel doubling until two
/// refinements agree to 1e-12 relatively.  The cutoff
///   z_max = arccosh(1 + 40/t + 20|nu|/t)
/// puts the integrand at exp(-t - 40 - 20|nu|) * cosh(nu z_max), at least
/// ~e-17 below the integral's scale for the supported parameter range.
inline double bessel_k(double nu, double t) {
  if (!(t > 0.0)) throw DomainError("bessel_k: t must be > 0");
  nu = std::abs(nu); // K_{-nu} = K_nu
  const double zmax = std::acosh(1.0 + 40.0 / t + 20.0 * nu / t);
  auto integrand = [=](double z) { return std::exp(-t * std::cosh(z)) * std::cosh(nu * z); };
  return quad::gl16_doubling(integrand, 0.0, zmax, 1e-12, 4, 1 << 14);
}

/// d/dt K_nu(t) = -K_{nu+1}(t) + (nu/t) K_nu(t).
inline double bessel_k_prime(double nu, double t) {
  if (!(t > 0.0)) throw DomainError("bessel_k_prime: t must be > 0");
  nu = std::abs(nu);
  return -bessel_k(nu + 1.0, t) + (nu / t) * bessel_k(nu, t);
}

/// Modified Bessel function of the first kind, ascending series
///   I_nu(t) = sum_k (t/2)^{2k+nu} / (k! Gamma(k+nu+1)),  nu >= 0, t >= 0.
/// Terms are built by recurrence (all positive), stopping when a term drops
/// below 1e-17 of the running sum.
inline double bessel_i(double nu, double t) {
  if (nu < 0.0) throw DomainError("bessel_i: nu must be >= 0");
  if (t < 0.0) throw DomainError("bessel_i: t must be >= 0");
  if (t == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double x = 0.5 * t;
  double term = std::exp(nu * std::log(x) - std::lgamma(nu + 1.0));
  double sum = term;
  const double x2 = x * x;
  for (int k = 0; k < 40000; ++k) {
    term *= x2 / ((k + 1.0) * (k + 1.0 + nu));
    sum += term;
    if (term < 1e-17 * sum) return sum;
  }
  throw AccuracyError("bessel_i: series did not converge");
}

/// Gauss hypergeometric series F(a,b;c;z) for 0 <= z < 1 (no analytic
/// continuation; callers keep z <= 0.9999).  Stops when the next term falls
/// below 1e-16 of the partial sum; hard cap of 1e6 terms.
inline double hyp2f1(double a, double b, double c, double z) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("hyp2f1: need 0 <= z < 1");
  if (c <= 0.0 && c == std::floor(c))
    throw DomainError("hyp2f1: c is a nonpositive integer");
  double term = 1.0, sum = 1.0;
  for (std::int64_t k = 0; k < 1000000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-16 * std::abs(sum)) return sum;
  }
  throw AccuracyError("hyp2f1: series did not converge within 1e6 terms");
}

/// d/dz F(a,b;c;z) = (a b / c) F(a+1, b+1; c+1; z).
inline double hyp2f1_prime(double a, double b, double c, double z) {
  return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z);
}

/// Second derivative via the same contiguous-shift identity.
inline double hyp2f1_second(double a, double b, double c, double z) {
  return a * b / c * (a + 1.0) * (b + 1.0) / (c + 1.0) *
         hyp2f1(a + 2.0, b + 2.0, c + 2.0, z);
}

} // namespace strausslab::specfun

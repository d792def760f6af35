#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "strausslab/testfuncs.hpp"

using strausslab::CriticalTestFn;
using strausslab::DomainError;
using strausslab::ModelParams;
using strausslab::SubcriticalTestFn;
using strausslab::bump_profile;
using strausslab::phi_fn;
using strausslab::phi_radial_laplace_residual;
using strausslab::phi_radial_laplace_residual_step;
using strausslab::sphere_area;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent K_nu oracle: Simpson quadrature of the cosh-integral
// representation with a wider cutoff than the library routine uses.
double k_oracle(double nu, double t) {
  const double zcut = std::acosh(1.0 + (80.0 + 40.0 * nu) / t);
  auto f = [&](double z) { return std::exp(-t * std::cosh(z)) * std::cosh(nu * z); };
  return strausslab::quad::simpson_doubling(f, 0.0, zcut, 1e-13, 64, 1 << 22);
}

double k_half(double t) { return std::sqrt(kPi / (2.0 * t)) * std::exp(-t); }

// Radial integral oracle on [0, R]: high-panel Gauss-Legendre, independent of
// the Simpson rule used inside the library.
template <class F>
double radial_integral_oracle(F&& f, double R) {
  return strausslab::quad::gl16_composite(f, 0.0, R, 64);
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

} // namespace

TEST_CASE("lambda: anchors at t = 0, positivity, decay") {
  // mu1 = 0, mu2sq = 0 -> delta = 1, Bessel order 1/2 has a closed form.
  SubcriticalTestFn half(1, 0.0, 0.0);
  CHECK(half.delta == Approx(1.0));
  CHECK(rel_err(half.lambda(0.0), k_half(1.0)) < 1e-10);
  CHECK(half.lambda(0.0) == Approx(0.46106850).margin(1e-7));

  // lambda(0) = K_{sqrt(delta)/2}(1) against the independent quadrature oracle.
  const double cfg[][2] = {{2.0, 0.0}, {3.0, 1.0}, {0.0, 0.0}, {1.5, 0.05}};
  for (auto [m1, m2] : cfg) {
    SubcriticalTestFn tf(1, m1, m2);
    CHECK(rel_err(tf.lambda(0.0), k_oracle(tf.nu, 1.0)) < 1e-10);
  }

  // delta = 0 spot value: lambda(t) = (1+t) K_0(1+t) for mu1 = 1.
  SubcriticalTestFn flat(1, 1.0, 0.0);
  CHECK(flat.delta == Approx(0.0).margin(1e-15));
  CHECK(rel_err(flat.lambda(0.7), 1.7 * k_oracle(0.0, 1.7)) < 1e-10);

  SubcriticalTestFn tf(1, 2.0, 0.0);
  for (double t : {0.0, 1.0, 5.0, 10.0, 20.0, 50.0}) CHECK(tf.lambda(t) > 0.0);
  CHECK(tf.lambda(50.0) < 1e-15); // e^{-51} kills the polynomial factor
}

TEST_CASE("lambda_prime: finite-difference oracle and t = 0 identities") {
  SubcriticalTestFn tf(1, 2.0, 0.0); // delta = 1
  const double h = 1e-5;
  const double fd = (tf.lambda(1.0 + h) - tf.lambda(1.0 - h)) / (2.0 * h);
  CHECK(rel_err(tf.lambda_prime(1.0), fd) < 1e-6);

  // lambda'(0) = (mu1+1+sqrt(delta))/2 K_nu(1) - K_{nu+1}(1).
  const double cfg[][2] = {{0.0, 0.0}, {2.0, 0.0}, {3.0, 1.0}, {1.5, 0.05}, {4.0, 2.0}};
  for (auto [m1, m2] : cfg) {
    SubcriticalTestFn s(1, m1, m2);
    const double sq = std::sqrt(s.delta);
    const double k0 = k_oracle(s.nu, 1.0), k1 = k_oracle(s.nu + 1.0, 1.0);
    // normalize by the Bessel scale: at (2, 0) the value is exactly zero
    CHECK(std::abs(s.lambda_prime(0.0) - (0.5 * (m1 + 1.0 + sq) * k0 - k1)) / k0 < 1e-10);
    // combination entering C_{f,g}: mu1 lambda(0) - lambda'(0)
    const double want = 0.5 * (m1 - 1.0 - sq) * k0 + k1;
    CHECK(rel_err(m1 * s.lambda(0.0) - s.lambda_prime(0.0), want) < 1e-9);
  }

  CHECK(tf.lambda_prime(50.0) < 0.0); // eventually decreasing
}

TEST_CASE("lambda solves its second-order equation") {
  // (1+t)^2 y'' - mu1 (1+t) y' + (mu1 + mu2sq - (1+t)^2) y = 0, including the
  // delta = 0 boundary cases (3,1) and (1,0).
  const double cfg[][2] = {{2.0, 0.0}, {3.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}};
  for (auto [m1, m2] : cfg) {
    SubcriticalTestFn tf(1, m1, m2);
    for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      INFO("mu1=" << m1 << " mu2sq=" << m2 << " t=" << t);
      CHECK(tf.lambda_ode_residual(t) < 1e-6);
    }
  }

  SECTION("wrong Bessel order is detected") {
    const double mu1 = 2.0, mu2sq = 0.0;
    SubcriticalTestFn tf(1, mu1, mu2sq);
    auto wrong = [&](double t) {
      return std::pow(1.0 + t, 0.5 * (mu1 + 1.0)) *
             strausslab::specfun::bessel_k(tf.nu + 0.3, 1.0 + t);
    };
    CHECK(strausslab::lambda_ode_residual_of(wrong, 1.0, mu1, mu2sq, 0.02) > 1e-2);
  }

  SECTION("plain central differences converge at second order") {
    SubcriticalTestFn tf(1, 2.0, 0.0);
    const double r1 = tf.lambda_ode_residual_step(2.0, 0.2);
    const double r2 = tf.lambda_ode_residual_step(2.0, 0.1);
    const double r3 = tf.lambda_ode_residual_step(2.0, 0.05);
    CHECK(r1 / r2 == Approx(4.0).margin(1.0));
    CHECK(r2 / r3 == Approx(4.0).margin(1.0));
  }
}

TEST_CASE("phi: normalization at the origin and closed forms") {
  CHECK(phi_fn(0.0, 1) == 2.0);
  CHECK(rel_err(phi_fn(0.0, 2), 2.0 * kPi) < 1e-14);
  CHECK(rel_err(phi_fn(0.0, 3), 4.0 * kPi) < 1e-14);
  CHECK(rel_err(phi_fn(0.0, 4), 2.0 * kPi * kPi) < 1e-14);

  // n = 3 reduces to 4 pi sinh(r)/r; exercises the Bessel-I path end to end.
  for (double r : {1e-8, 0.3, 1.0, 2.5, 10.0}) {
    CHECK(rel_err(phi_fn(r, 3), 4.0 * kPi * std::sinh(r) / r) < 1e-10);
  }
  CHECK(phi_fn(1.0, 3) == Approx(4.0 * kPi * std::sinh(1.0)).epsilon(1e-12));

  // series limit continuity where the r -> 0 fill hands over to the formula
  for (int n : {2, 3, 4, 5}) {
    CHECK(rel_err(phi_fn(1e-7, n), sphere_area(n)) < 1e-12);
  }

  CHECK_THROWS_AS(phi_fn(-0.5, 3), DomainError);
}

TEST_CASE("phi solves the radial eigenvalue equation") {
  for (int n : {1, 2, 3}) {
    for (double r : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
      INFO("n=" << n << " r=" << r);
      CHECK(phi_radial_laplace_residual(r, n) < 1e-6);
    }
  }

  // n = 1 satisfies the identity analytically; only differencing noise is left.
  for (double r : {0.5, 5.0, 20.0}) {
    CHECK(phi_radial_laplace_residual(r, 1) < 1e-9);
  }

  SECTION("second-order convergence of the plain-step residual") {
    const double r1 = phi_radial_laplace_residual_step(1.5, 3, 0.2);
    const double r2 = phi_radial_laplace_residual_step(1.5, 3, 0.1);
    const double r3 = phi_radial_laplace_residual_step(1.5, 3, 0.05);
    CHECK(r1 / r2 == Approx(4.0).margin(1.0));
    CHECK(r2 / r3 == Approx(4.0).margin(1.0));
  }

  SECTION("asymptotic growth band") {
    // phi(r) r^{(n-1)/2} e^{-r} -> (2 pi)^{(n-1)/2}
    for (int n : {1, 2, 3}) {
      const double lim = std::pow(2.0 * kPi, 0.5 * (n - 1));
      for (double r : {10.0, 15.0, 20.0, 30.0, 40.0}) {
        const double q = phi_fn(r, n) * std::pow(r, 0.5 * (n - 1)) * std::exp(-r);
        INFO("n=" << n << " r=" << r);
        CHECK(q > 0.9 * lim);
        CHECK(q < 1.1 * lim);
      }
    }
  }
}

TEST_CASE("psi mass bound over the forward ball") {
  SubcriticalTestFn tf(1, 2.0, 0.0); // delta = 1
  const double p = 2.0, R = 0.5;

  auto [lhs0, rhs0] = tf.psi_lp_norm_bound(0.0, p, R);
  CHECK(lhs0 > 0.0);

  for (double t : {1.0, 2.0, 5.0, 10.0}) {
    auto [lhs, rhs] = tf.psi_lp_norm_bound(t, p, R);
    INFO("t=" << t);
    CHECK(lhs <= rhs);
  }

  // calibration point: the bound is tight at t = 1
  auto [l1, r1] = tf.psi_lp_norm_bound(1.0, p, R);
  CHECK(l1 / r1 == Approx(1.0).epsilon(1e-9));

  // the two sides track each other within a fixed factor
  for (double t : {5.0, 8.0, 10.0, 12.0, 15.0}) {
    auto [lhs, rhs] = tf.psi_lp_norm_bound(t, p, R);
    CHECK(rhs / lhs < 3.0);
    CHECK(rhs / lhs >= 1.0);
  }

  CHECK_THROWS_AS(tf.psi_lp_norm_bound(1.0, 0.9, R), DomainError);
}

TEST_CASE("critical family: admissibility window") {
  // (n, mu1, mu2sq) = (3, 2, 0): delta = 1, window (0, 1)
  CHECK_NOTHROW(CriticalTestFn(3, 2.0, 0.0, 0.5));
  CHECK_THROWS_AS(CriticalTestFn(3, 2.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(CriticalTestFn(3, 2.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(CriticalTestFn(3, 2.0, 0.0, -0.3), DomainError);
  CHECK_THROWS_AS(CriticalTestFn(3, 2.0, 0.0, 1.2), DomainError);

  // the boundary index is still constructible through the unchecked path
  const CriticalTestFn edge = CriticalTestFn::unchecked(3, 2.0, 0.0, 1.0);
  CHECK(edge.Phi(1.0, 0.0) == Approx(1.0));

  // delta >= n^2: window empty
  CHECK_THROWS_AS(CriticalTestFn(1, 4.0, 0.0, -0.4), DomainError);
  // delta < 0: hypergeometric parameters undefined
  CHECK_THROWS_AS(CriticalTestFn(3, 1.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(SubcriticalTestFn(1, 1.0, 1.0), DomainError);

  const CriticalTestFn tf(3, 2.0, 0.0, 0.5);
  CHECK(tf.admissible_lo() == Approx(0.0).margin(1e-15));
  CHECK(tf.admissible_hi() == Approx(1.0));
}

TEST_CASE("critical family: hypergeometric parameters attached to beta") {
  const double cfg[][4] = {{3, 2.0, 0.0, 0.5},
                           {2, 1.5, 0.05, 0.4},
                           {4, 1.0, 0.0, 1.5},
                           {3, 3.0, 1.0, 0.3},
                           {3, 0.0, 0.1875, 1.0}};
  for (auto [nd, m1, m2, beta] : cfg) {
    const CriticalTestFn tf(static_cast<int>(nd), m1, m2, beta);
    CHECK(std::abs(tf.hp.a + tf.hp.b + 1.0 - (beta + 0.5 + 0.5 * m1)) < 1e-12);
    CHECK(std::abs(tf.hp.a * tf.hp.b - 0.25 * (beta * (beta + m1 - 1.0) + m2)) < 1e-12);
    CHECK(tf.hp.c == Approx(0.5 * nd));
  }
}

TEST_CASE("Phi on the axis and the light-cone domain") {
  const CriticalTestFn tf(3, 2.0, 0.0, 0.5);
  for (double t : {0.0, 1.0, 4.0}) {
    CHECK(rel_err(tf.Phi(t, 0.0), std::pow(1.0 + t, 0.5)) < 1e-14);
  }
  CHECK_THROWS_AS(tf.Phi(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(tf.Phi(0.5, 1.6), DomainError);

  // psi >= 1 pushes Phi above the pure power on the axis
  for (double t : {0.5, 2.0}) {
    for (double frac : {0.2, 0.5, 0.8}) {
      CHECK(tf.Phi(t, frac * (1.0 + t)) >= std::pow(1.0 + t, 1.0 - tf.beta));
    }
  }
}

TEST_CASE("Phi solves the adjoint equation") {
  struct Cfg {
    int n;
    double mu1, mu2sq, beta;
    bool strict;
  };
  const Cfg cfgs[] = {{3, 2.0, 0.0, 1.0, false}, // boundary index
                      {3, 2.0, 0.0, 0.5, true},
                      {2, 1.5, 0.05, 0.4, true},
                      {3, 3.0, 1.0, 0.3, true}}; // mass term exercised
  for (const auto& c : cfgs) {
    const CriticalTestFn tf = c.strict
                                  ? CriticalTestFn(c.n, c.mu1, c.mu2sq, c.beta)
                                  : CriticalTestFn::unchecked(c.n, c.mu1, c.mu2sq, c.beta);
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      for (double frac : {0.0, 0.3, 0.6, 0.9}) {
        INFO("n=" << c.n << " mu1=" << c.mu1 << " beta=" << c.beta << " t=" << t
                  << " r/(1+t)=" << frac);
        CHECK(tf.adjoint_residual(t, frac * (1.0 + t)) < 1e-5);
      }
    }
  }

  // headline spot check for the boundary index
  const CriticalTestFn edge = CriticalTestFn::unchecked(3, 2.0, 0.0, 1.0);
  CHECK(edge.adjoint_residual(1.0, 0.8) < 1e-5);

  SECTION("plain-step residual converges at second order") {
    const CriticalTestFn tf(3, 2.0, 0.0, 0.5);
    const double r1 = tf.adjoint_residual_step(1.0, 0.5, 0.05);
    const double r2 = tf.adjoint_residual_step(1.0, 0.5, 0.025);
    const double r3 = tf.adjoint_residual_step(1.0, 0.5, 0.0125);
    CHECK(r1 / r2 == Approx(4.0).margin(1.0));
    CHECK(r2 / r3 == Approx(4.0).margin(1.0));
  }
}

TEST_CASE("psi_beta satisfies the hypergeometric equation") {
  const double cfg[][4] = {{3, 2.0, 0.0, 0.5},
                           {2, 1.5, 0.05, 0.4},
                           {4, 1.0, 0.0, 1.5},
                           {3, 3.0, 1.0, 0.3}};
  for (auto [nd, m1, m2, beta] : cfg) {
    const CriticalTestFn tf(static_cast<int>(nd), m1, m2, beta);
    for (double z = 0.0; z <= 0.9 + 1e-12; z += 0.1) {
      INFO("n=" << nd << " beta=" << beta << " z=" << z);
      // series derivatives are exact, so only roundoff remains
      CHECK(tf.hypergeometric_ode_residual(z) < 1e-10);
    }
  }
  // boundary index through the unchecked path
  const CriticalTestFn edge = CriticalTestFn::unchecked(3, 2.0, 0.0, 1.0);
  CHECK(edge.hypergeometric_ode_residual(0.5) < 1e-10);
}

TEST_CASE("psi_beta bands and psi~ normalization") {
  const double cfg[][4] = {{3, 2.0, 0.0, 0.5},
                           {2, 1.5, 0.05, 0.4},
                           {4, 1.0, 0.0, 1.5},
                           {3, 3.0, 1.0, 0.3},
                           {3, 0.0, 0.1875, 1.0}};
  const double zs[] = {0.0, 0.2, 0.5, 0.8, 0.95, 0.99, 0.999, 0.9999};
  for (auto [nd, m1, m2, beta] : cfg) {
    const CriticalTestFn tf(static_cast<int>(nd), m1, m2, beta);
    // admissible beta means a, b > 0 and c-a-b > 0: the series increases from 1
    // and stays below the z -> 1 limit Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)).
    const auto& [a, b, c0] = tf.hp;
    const double cap = std::exp(std::lgamma(c0) + std::lgamma(c0 - a - b) -
                                std::lgamma(c0 - a) - std::lgamma(c0 - b));
    double prev = 0.0;
    for (double z : zs) {
      const double v = tf.psi(z);
      INFO("n=" << nd << " beta=" << beta << " z=" << z);
      CHECK(v >= 1.0 - 1e-12);
      CHECK(v <= cap * (1.0 + 1e-8));
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(tf.psi_tilde(0.0) == 2.0 * beta + m1 - 2.0);
  }
}

TEST_CASE("compensated psi_beta' band near z = 1") {
  // for beta > (n - mu1 - 1)/2 the derivative blows up like
  // (1-z)^{(n-mu1-1)/2 - beta}; multiplying by (1-sqrt(z))^{beta-(n-mu1-1)/2}
  // must leave a bounded, positive band.
  const double cfg[][4] = {{3, 2.0, 0.0, 0.5}, {2, 1.5, 0.05, 0.4}, {4, 1.0, 0.0, 1.5}};
  for (auto [nd, m1, m2, beta] : cfg) {
    const CriticalTestFn tf(static_cast<int>(nd), m1, m2, beta);
    const double s = beta - 0.5 * (nd - m1 - 1.0);
    REQUIRE(s > 0.0);
    double lo = 1e300, hi = 0.0;
    for (double z : {0.9, 0.93, 0.96, 0.99, 0.997, 0.9999}) {
      const double q = std::abs(tf.psi_prime(z)) * std::pow(1.0 - std::sqrt(z), s);
      CHECK(q > 0.0);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    INFO("n=" << nd << " beta=" << beta);
    CHECK(hi / lo < 10.0);
  }
}

TEST_CASE("data energies") {
  auto zero = [](double) { return 0.0; };

  SECTION("f = 0: E0 vanishes, E1 integrates g psi") {
    const CriticalTestFn tf(3, 2.0, 0.0, 0.5);
    const double R = 0.5;
    auto g = [R](double r) { return bump_profile(r, R, 1.0); };
    auto [e0, e1] = tf.data_energies(zero, g, R);
    CHECK(e0 == 0.0);
    const double want = sphere_area(3) * radial_integral_oracle(
        [&](double r) { return g(r) * tf.psi(r * r) * r * r; }, R);
    CHECK(rel_err(e1, want) < 1e-9);
    CHECK(e1 > 0.0);
  }

  SECTION("g = 0 at beta = 1 - mu1: only the derivative term feeds E1") {
    const CriticalTestFn tf(3, 0.0, 0.1875, 1.0); // delta = 1/4, window (3/4, 2)
    CHECK(tf.beta == Approx(1.0 - tf.mu1));
    const double R = 0.5;
    auto f = [R](double r) { return bump_profile(r, R, 1.0); };
    auto [e0, e1] = tf.data_energies(f, zero, R);
    const double want0 = sphere_area(3) * radial_integral_oracle(
        [&](double r) { return f(r) * tf.psi(r * r) * r * r; }, R);
    const double want1 = sphere_area(3) * radial_integral_oracle(
        [&](double r) { return f(r) * 2.0 * r * r * tf.psi_prime(r * r) * r * r; }, R);
    CHECK(rel_err(e0, want0) < 1e-9);
    CHECK(rel_err(e1, want1) < 1e-9);
    CHECK(e1 > 0.0);

    // psi >= 1 makes E0 dominate the plain mass of f
    const double mass = sphere_area(3) * radial_integral_oracle(
        [&](double r) { return f(r) * r * r; }, R);
    CHECK(e0 >= mass);
  }

  SECTION("generic nonnegative data give positive energies") {
    const CriticalTestFn tf(3, 2.0, 0.0, 0.5);
    const double R = 0.8;
    auto f = [R](double r) { return bump_profile(r, R, 0.7); };
    auto g = [R](double r) { return bump_profile(r, R, 1.3); };
    auto [e0, e1] = tf.data_energies(f, g, R);
    CHECK(e0 > 0.0);
    CHECK(e1 > 0.0);
  }

  SECTION("support must stay inside the unit ball") {
    const CriticalTestFn tf(3, 2.0, 0.0, 0.5);
    auto f = [](double r) { return bump_profile(r, 1.0, 1.0); };
    CHECK_THROWS_AS(tf.data_energies(f, zero, 1.0), DomainError);
    CHECK_THROWS_AS(tf.data_energies(f, zero, 1.2), DomainError);
    CHECK_THROWS_AS(tf.data_energies(f, zero, 0.0), DomainError);
  }
}

TEST_CASE("C_{f,g}: positivity, sign condition, closed forms") {
  auto zero = [](double) { return 0.0; };

  SECTION("pure-velocity data") {
    SubcriticalTestFn tf(3, 2.0, 0.0);
    const double R = 1.0;
    auto g = [R](double r) { return bump_profile(r, R, 1.0); };
    const double got = tf.c_fg(zero, g, R);
    const double want = tf.lambda(0.0) * sphere_area(3) * radial_integral_oracle(
        [&](double r) { return g(r) * phi_fn(r, 3) * r * r; }, R);
    CHECK(rel_err(got, want) < 1e-9);
    CHECK(got > 0.0);
  }

  SECTION("boundary of the sign condition collapses to the K_{nu+1} term") {
    // g = -((mu1-1-sqrt(delta))/2) f keeps the constraint tight yet valid and
    // cancels everything except K_{nu+1}(1) * integral of f phi.
    SubcriticalTestFn tf(3, 3.0, 1.0); // delta = 0, coefficient 1
    const double k = 0.5 * (tf.mu1 - 1.0 - std::sqrt(tf.delta));
    const double R = 0.8;
    auto f = [R](double r) { return bump_profile(r, R, 1.0); };
    auto g = [&, R](double r) { return -k * f(r); };
    const double got = tf.c_fg(f, g, R);
    const double want = k_oracle(tf.nu + 1.0, 1.0) * sphere_area(3) *
                        radial_integral_oracle(
                            [&](double r) { return f(r) * phi_fn(r, 3) * r * r; }, R);
    CHECK(rel_err(got, want) < 1e-9);
    CHECK(got > 0.0);
  }

  SECTION("violating data are rejected") {
    SubcriticalTestFn tf(1, 2.0, 0.0); // delta = 1: condition is f >= 0, g >= 0
    auto f = [](double r) { return bump_profile(r, 1.0, 1.0); };
    auto negf = [&](double r) { return -f(r); };
    CHECK_THROWS_AS(tf.c_fg(f, negf, 1.0), DomainError);
    CHECK_THROWS_AS(tf.c_fg(negf, zero, 1.0), DomainError);
  }

  SECTION("homogeneity in the data") {
    SubcriticalTestFn tf(2, 1.5, 0.05);
    auto f = [](double r) { return bump_profile(r, 0.6, 1.0); };
    auto g = [](double r) { return bump_profile(r, 0.6, 0.5); };
    auto f2 = [&](double r) { return 2.0 * f(r); };
    auto g2 = [&](double r) { return 2.0 * g(r); };
    CHECK(tf.c_fg(f2, g2, 0.6) == Approx(2.0 * tf.c_fg(f, g, 0.6)).epsilon(1e-12));
  }
}

TEST_CASE("profiles: default bump and model plumbing") {
  CHECK(bump_profile(0.0, 1.0, 2.0) == 2.0);
  CHECK(bump_profile(1.0, 1.0, 2.0) == 0.0);
  CHECK(bump_profile(1.5, 1.0, 2.0) == 0.0);
  CHECK(bump_profile(0.5, 1.0, 1.0) == Approx(std::pow(0.75, 4)));
  // vanishes to fourth order at the edge
  CHECK(bump_profile(1.0 - 1e-4, 1.0, 1.0) < 1e-12);

  ModelParams m;
  m.n = 3;
  m.R = 0.5;
  m.profile.amp_f = 2.0;
  m.profile.amp_g = 3.0;
  CHECK(strausslab::profile_f(m, 0.0) == 2.0);
  CHECK(strausslab::profile_g(m, 0.0) == 3.0);
  CHECK(strausslab::profile_f(m, 0.6) == 0.0);

  m.profile.kind = strausslab::DataProfile::Kind::constant;
  CHECK(strausslab::profile_f(m, 7.0) == 2.0);

  // convenience constructor mirrors the model fields
  ModelParams m2;
  m2.n = 3;
  m2.mu1 = 2.0;
  m2.mu2sq = 0.0;
  SubcriticalTestFn tf(m2);
  CHECK(tf.n == 3);
  CHECK(tf.delta == Approx(1.0));
}

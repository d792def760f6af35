#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "strausslab/errors.hpp"

// Small quadrature / finite-difference toolkit shared by the special-function
// and test-function layers.  Everything here is deterministic and allocation
// free on the hot paths.

namespace strausslab::quad {

// 16-point Gauss-Legendre rule on [-1,1] (exact through degree 31).
inline constexpr int kGlPoints = 8; // symmetric half
inline constexpr double kGlNode[kGlPoints] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
inline constexpr double kGlWeight[kGlPoints] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

/// One 16-point Gauss-Legendre panel over [a,b].
template <class F>
double gl16_panel(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < kGlPoints; ++i) {
    const double dx = half * kGlNode[i];
    acc += kGlWeight[i] * (f(mid + dx) + f(mid - dx));
  }
  return acc * half;
}

/// Composite 16-point Gauss-Legendre with `panels` equal panels on [a,b].
template <class F>
double gl16_composite(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k) acc += gl16_panel(f, a + k * h, a + (k + 1) * h);
  return acc;
}

/// Panel-doubling composite Gauss-Legendre: doubles the panel count until two
/// consecutive refinements agree to `rel_tol` relatively.
template <class F>
double gl16_doubling(F&& f, double a, double b, double rel_tol = 1e-12,
                     int start_panels = 4, int max_panels = 1 << 14) {
  double prev = gl16_composite(f, a, b, start_panels);
  for (int panels = 2 * start_panels; panels <= max_panels; panels *= 2) {
    const double cur = gl16_composite(f, a, b, panels);
    const double scale = std::max(std::abs(cur), std::abs(prev));
    if (std::abs(cur - prev) <= rel_tol * std::max(scale, 1e-300)) return cur;
    prev = cur;
  }
  throw AccuracyError("gl16_doubling: no convergence to requested tolerance");
}

/// Composite Simpson with `panels` (even) subintervals on [a,b].
template <class F>
double simpson_composite(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

/// Simpson with panel doubling; starts at `start_panels` and doubles until
/// 1e-10 (default) relative agreement between refinements.
template <class F>
double simpson_doubling(F&& f, double a, double b, double rel_tol = 1e-10,
                        int start_panels = 2048, int max_panels = 1 << 20) {
  if (b <= a) return 0.0;
  double prev = simpson_composite(f, a, b, start_panels);
  for (int panels = 2 * start_panels; panels <= max_panels; panels *= 2) {
    const double cur = simpson_composite(f, a, b, panels);
    const double scale = std::max(std::abs(cur), std::abs(prev));
    if (std::abs(cur - prev) <= rel_tol * std::max(scale, 1e-300)) return cur;
    prev = cur;
  }
  throw AccuracyError("simpson_doubling: no convergence to requested tolerance");
}

/// Trapezoid weights on an evenly sampled series; returns the running
/// integral so callers can form cumulative quantities in O(n).
inline double trapezoid_uniform(const double* y, std::size_t n, double h) {
  if (n < 2) return 0.0;
  double acc = 0.5 * (y[0] + y[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) acc += y[i];
  return acc * h;
}

// Richardson-extrapolated central differences (three levels h, h/2, h/4).
// Error O(h^6) for smooth f; used wherever the contract says
// "step-converged finite differences".

template <class F>
double derivative1_richardson(F&& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  const double d0 = d(h), d1 = d(h / 2), d2 = d(h / 4);
  const double r1 = (4.0 * d1 - d0) / 3.0;
  const double r2 = (4.0 * d2 - d1) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

template <class F>
double derivative2_richardson(F&& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s); };
  const double d0 = d(h), d1 = d(h / 2), d2 = d(h / 4);
  const double r1 = (4.0 * d1 - d0) / 3.0;
  const double r2 = (4.0 * d2 - d1) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

} // namespace strausslab::quad

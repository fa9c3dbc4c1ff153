#pragma once

// Independent reference computations shared by the test suites. Nothing
// here calls into the library except through the function being checked.

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)> &f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Three-point Gauss-Legendre on [a, b]; exact for cubics and never
/// evaluates f at the endpoints.
inline double gauss3(const std::function<double(double)> &f, double a, double b) {
  const double m = 0.5 * (a + b), h = 0.5 * (b - a), x = std::sqrt(0.6);
  return h * (5.0 * f(m - h * x) + 8.0 * f(m) + 5.0 * f(m + h * x)) / 9.0;
}

/// Central difference of f at x.
inline double central(const std::function<double(double)> &f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double relative(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

/// Roots t2 < t1 of t^2 + 2 b t + c = 0 by the quadratic formula.
inline std::pair<double, double> quadratic_roots(double b, double c) {
  const double d = std::sqrt(b * b - c);
  return {-b + d, -b - d};
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracle

#pragma once

#include <functional>
#include <string>

namespace grt {

/// Cardinal B-spline of degree n (0..3) supported on [0, n + 1].
double bspline(int n, double t);

/// Keys cubic convolution kernel, 3 B3(t + 2) - (B2(t + 2) + B2(t + 1)),
/// supported on [-2, 2].
double keys_kernel(double t);

/// Keys kernel in its closed piecewise form (a = -1/2); used on hot paths.
double keys_kernel_fast(double t);

/// Linear interpolation kernel (hat function) on [-1, 1].
double hat_kernel(double t);

/// Interpolation kernel phi(u), zero for |u| >= support_radius.
struct KernelSpec {
  std::string name;
  std::function<double(double)> eval;
  double support_radius = 0.0;
  int smoothness = 0;
  /// Breakpoints of the piecewise polynomial are at integer offsets.
  bool integer_knots = true;
};

KernelSpec keys_kernel_spec();
KernelSpec hat_kernel_spec();
/// Looks up "keys" or "linear"; throws ConfigError otherwise.
KernelSpec kernel_by_name(const std::string &name);

}  // namespace grt

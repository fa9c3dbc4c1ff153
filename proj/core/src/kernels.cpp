#include "grt/kernels.hpp"

#include <cmath>

#include "grt/errors.hpp"

namespace grt {

double bspline(int n, double t) {
  if (n < 0 || n > 3) throw std::invalid_argument("bspline: degree must be in 0..3");
  if (t < 0.0 || t >= static_cast<double>(n + 1)) return 0.0;
  if (n == 0) return 1.0;
  // Cox-de Boor on the integer knots 0, 1, ..., n + 1.
  return (t * bspline(n - 1, t) + (static_cast<double>(n + 1) - t) * bspline(n - 1, t - 1.0)) /
         static_cast<double>(n);
}

double keys_kernel(double t) {
  return 3.0 * bspline(3, t + 2.0) - (bspline(2, t + 2.0) + bspline(2, t + 1.0));
}

double keys_kernel_fast(double t) {
  const double a = std::abs(t);
  if (a < 1.0) return (1.5 * a - 2.5) * a * a + 1.0;
  if (a < 2.0) return ((-0.5 * a + 2.5) * a - 4.0) * a + 2.0;
  return 0.0;
}

double hat_kernel(double t) {
  const double a = std::abs(t);
  return a < 1.0 ? 1.0 - a : 0.0;
}

KernelSpec keys_kernel_spec() { return {"keys", keys_kernel_fast, 2.0, 1, true}; }

KernelSpec hat_kernel_spec() { return {"linear", hat_kernel, 1.0, 0, true}; }

KernelSpec kernel_by_name(const std::string &name) {
  if (name == "keys") return keys_kernel_spec();
  if (name == "linear") return hat_kernel_spec();
  throw ConfigError("unknown interpolation kernel '" + name + "' (expected keys or linear)");
}

}  // namespace grt

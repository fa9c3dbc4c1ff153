#pragma once

#include <cstddef>
#include <vector>

namespace grt::detail {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
const GaussRule &gauss_legendre(std::size_t n);

/// int_a^b f with `rule` on a single panel.
template <typename F>
double integrate_panel(const GaussRule &rule, double a, double b, F &&f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return s * half;
}

}  // namespace grt::detail

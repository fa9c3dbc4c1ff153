#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grt/geometry.hpp"
#include "grt/kernels.hpp"

namespace grt {

/// Evenly spaced axis lo, lo + step, ..., hi (hi included when it lands on the grid).
std::vector<double> uniform_axis(double lo, double hi, double step);

struct DtbConfig {
  double kappa = 0.5;
  double mu = 1.0;
  KernelSpec kernel_alpha = keys_kernel_spec();
  KernelSpec kernel_p = keys_kernel_spec();
  /// Lower bound for the frequency cutoff. The leading part of the tail beyond
  /// it is added in closed form; the cutoff is raised when the rest could
  /// exceed 1e-10.
  double lambda_max = 400.0;
  /// Quadrature nodes per unit length in u, s, t and lambda.
  std::size_t quad_points = 64;
  std::vector<double> r_grid = uniform_axis(-8.0, 8.0, 0.05);

  void validate() const;
};

/// h_l(u) = int phi_alpha(s) phi_p(mu s dphi/dalpha + u) ds.
double tangency_kernel(double u, double dalpha, const DtbConfig &cfg);
double tangency_kernel(double u, const Tangency &t, const DtbConfig &cfg);
/// |u| beyond this bound gives h_l(u) = 0.
double tangency_kernel_support(double dalpha, const DtbConfig &cfg);

/// Coefficient c in 1 + c |lambda|^3 for the given effective redundancy weight.
double response_coefficient(double kappa, double rho_eff);

/// Frequency cutoff actually used for coefficient c.
double effective_lambda_max(double c, double lambda_max);

/// R(t) = (1/pi) int_0^inf cos(lambda t) / (1 + c lambda^3) d lambda with
/// c = kappa / (2 pi rho_eff); normalized so that int R dt = 1. Gauss panels
/// up to the cutoff plus the closed-form 1/(c lambda^3) tail.
double r_kernel(double t, double rho_eff, double kappa, double lambda_max = 400.0,
                std::size_t quad_points = 64);

/// Tabulated R and its primitive C(t) = int_0^t R on t = k / quad_points,
/// both computed directly from the frequency integral, with a finer table
/// over the first few cells. C is odd and tends to +-1/2.
class ResponseTable {
 public:
  ResponseTable(double rho_eff, double kappa, double lambda_max, std::size_t quad_points,
                double t_max);

  double value(double t) const;
  /// int_0^t R, cubic Hermite between nodes, asymptotic tail beyond t_max.
  double cumulative(double t) const;
  /// int_{-t_max}^{t_max} R by composite Simpson over the table.
  double total_mass() const;

  double t_max() const { return t_max_; }
  double step() const { return dt_; }
  double coefficient() const { return c_; }
  double cutoff() const { return lambda_; }

 private:
  double c_;
  double lambda_;
  double dt_;
  double t_max_;
  double fine_dt_;
  std::vector<double> r_;
  std::vector<double> cum_;
  std::vector<double> r_fine_;
  std::vector<double> cum_fine_;
};

/// Upsilon_l(r) = int h_l(u) int_{u_l}^{u_l + r} R(t) dt du, u_l = u / |grad phi|.
double upsilon_l(double r, const Tangency &t, double rho_eff, const DtbConfig &cfg);

struct DtbCurve {
  std::vector<double> r_values;
  /// sum_l nu_l Upsilon_l / sum_l nu_l.
  std::vector<double> upsilon;
  /// Upsilon_l per tangency, same order as `fan`.
  std::vector<std::vector<double>> terms;
  std::vector<Tangency> fan;
  double rho_eff = 0.0;
  std::vector<std::string> warnings;

  /// Linear interpolation in r_values (clamped at the ends).
  double at(double r) const;
};

/// Weighted DTB over a tangency fan, evaluated on cfg.r_grid.
DtbCurve combined_dtb(const std::vector<Tangency> &fan, const DtbConfig &cfg);

/// Non-empty when mu * dphi/dalpha lies within 1e-6 of a rational with
/// denominator <= 10.
std::vector<std::string> resonance_warnings(const std::vector<Tangency> &fan, double mu);

}  // namespace grt

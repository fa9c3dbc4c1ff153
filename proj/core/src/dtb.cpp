#include "grt/dtb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "grt/errors.hpp"
#include "grt/parallel.hpp"
#include "quadrature.hpp"

namespace grt {

namespace {

constexpr double kPi = std::numbers::pi;
// Nodes per lambda panel; panels span at most pi/4 of phase.
constexpr std::size_t kLambdaNodes = 6;

// Integrates f over [lo, hi], split at `cuts`, 4-point Gauss per piece
// (exact for the piecewise polynomials arising from two cubic kernels).
template <typename F>
double integrate_pieces(std::vector<double> cuts, double lo, double hi, F &&f) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  const auto &rule = detail::gauss_legendre(4);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = std::max(lo, cuts[k]), b = std::min(hi, cuts[k + 1]);
    if (b > a) s += detail::integrate_panel(rule, a, b, f);
  }
  return s;
}

struct LambdaNodes {
  std::vector<double> lambda;
  std::vector<double> weight;
};

LambdaNodes lambda_nodes(double cutoff, double panel) {
  const auto n_panels = static_cast<std::size_t>(std::ceil(cutoff / panel));
  const double h = cutoff / static_cast<double>(n_panels);
  const auto &rule = detail::gauss_legendre(kLambdaNodes);
  LambdaNodes out;
  out.lambda.reserve(n_panels * kLambdaNodes);
  out.weight.reserve(n_panels * kLambdaNodes);
  for (std::size_t p = 0; p < n_panels; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * h;
    for (std::size_t k = 0; k < kLambdaNodes; ++k) {
      out.lambda.push_back(mid + 0.5 * h * rule.nodes[k]);
      out.weight.push_back(0.5 * h * rule.weights[k]);
    }
  }
  return out;
}

}  // namespace

std::vector<double> uniform_axis(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw ConfigError("uniform_axis: need step > 0 and hi >= lo");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = lo + static_cast<double>(k) * step;
  return out;
}

void DtbConfig::validate() const {
  if (!(kappa > 0.0)) throw ConfigError("dtb.kappa must be positive");
  if (!(mu > 0.0)) throw ConfigError("dtb.mu must be positive");
  if (!(lambda_max > 0.0)) throw ConfigError("dtb.lambda_max must be positive");
  if (quad_points < 4) throw ConfigError("dtb.quad_points must be at least 4");
  if (r_grid.empty()) throw ConfigError("dtb r grid is empty");
}

double tangency_kernel_support(double dalpha, const DtbConfig &cfg) {
  return cfg.kernel_p.support_radius + std::abs(cfg.mu * dalpha) * cfg.kernel_alpha.support_radius;
}

double tangency_kernel(double u, double dalpha, const DtbConfig &cfg) {
  const double a = cfg.mu * dalpha;
  const double ra = cfg.kernel_alpha.support_radius;
  const double rp = cfg.kernel_p.support_radius;
  const auto integrand = [&](double s) {
    return cfg.kernel_alpha.eval(s) * cfg.kernel_p.eval(a * s + u);
  };
  double lo = -ra, hi = ra;
  if (a != 0.0) {
    // a s + u must stay inside the support of phi_p.
    double s0 = (-rp - u) / a, s1 = (rp - u) / a;
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
  } else if (std::abs(u) >= rp) {
    return 0.0;
  }
  if (!(hi > lo)) return 0.0;

  std::vector<double> cuts;
  if (cfg.kernel_alpha.integer_knots && cfg.kernel_p.integer_knots) {
    for (double k = std::ceil(lo); k <= hi; k += 1.0) cuts.push_back(k);
    if (a != 0.0) {
      const double v0 = std::min(a * lo + u, a * hi + u), v1 = std::max(a * lo + u, a * hi + u);
      for (double k = std::ceil(v0); k <= v1; k += 1.0) cuts.push_back((k - u) / a);
    }
  } else {
    const double h = 1.0 / static_cast<double>(cfg.quad_points);
    for (double s = lo + h; s < hi; s += h) cuts.push_back(s);
  }
  return integrate_pieces(std::move(cuts), lo, hi, integrand);
}

double tangency_kernel(double u, const Tangency &t, const DtbConfig &cfg) {
  return tangency_kernel(u, t.dalpha, cfg);
}

double response_coefficient(double kappa, double rho_eff) {
  if (!(rho_eff > 0.0)) throw std::invalid_argument("rho_eff must be positive");
  return kappa / (2.0 * kPi * rho_eff);
}

double effective_lambda_max(double c, double lambda_max) {
  // The 1/(c l^3) part of the tail is added in closed form; what remains is
  // bounded by (1/pi) int_L^inf 1/(c^2 l^6) = 1/(5 pi c^2 L^5) < 1e-10.
  return std::max(lambda_max, std::pow(1.0 / (5.0 * kPi * c * c * 1e-10), 0.2));
}

namespace {

// Cosine integral Ci(x) = -int_x^inf cos(u)/u du, x > 0: power series for
// small x, continued fraction of E1(ix) otherwise.
double cosine_integral(double x) {
  constexpr double kEuler = 0.57721566490153286061;
  if (x <= 4.0) {
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 60; ++k) {
      term *= -x * x / ((2.0 * k - 1.0) * (2.0 * k));
      const double add = term / (2.0 * k);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return kEuler + std::log(x) + sum;
  }
  using C = std::complex<double>;
  C b(1.0, x), c(1e300, 0.0), d = 1.0 / b, h = d;
  for (int i = 1; i < 200; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  h *= C(std::cos(x), -std::sin(x));
  return -h.real();
}

// (1/pi) int_L^inf cos(l t) / (1 + c l^3) dl, keeping the leading 1/(c l^3).
double r_tail(double t, double c, double cutoff) {
  const double at = std::abs(t);
  if (at == 0.0) return 1.0 / (2.0 * kPi * c * cutoff * cutoff);
  const double x = cutoff * at;
  // t^2 int_x^inf cos(u)/u^3 du
  const double j3 = std::cos(x) / (2.0 * cutoff * cutoff) - at * std::sin(x) / (2.0 * cutoff) +
                    0.5 * at * at * cosine_integral(x);
  return j3 / (kPi * c);
}

// (1/pi) int_L^inf sin(l t) / (l (1 + c l^3)) dl, same truncation.
double cumulative_tail(double t, double c, double cutoff) {
  const double at = std::abs(t);
  if (at == 0.0) return 0.0;
  const double x = cutoff * at;
  const double j3 = std::cos(x) / (2.0 * cutoff * cutoff) - at * std::sin(x) / (2.0 * cutoff) +
                    0.5 * at * at * cosine_integral(x);
  const double v = (std::sin(x) / (3.0 * cutoff * cutoff * cutoff) + at * j3 / 3.0) / (kPi * c);
  return t < 0.0 ? -v : v;
}

}  // namespace

double r_kernel(double t, double rho_eff, double kappa, double lambda_max,
                std::size_t quad_points) {
  const double c = response_coefficient(kappa, rho_eff);
  const double cutoff = effective_lambda_max(c, lambda_max);
  double panel = 1.0 / static_cast<double>(quad_points);
  if (t != 0.0) panel = std::min(panel, kPi / (4.0 * std::abs(t)));
  const LambdaNodes nodes = lambda_nodes(cutoff, panel);
  double s = 0.0;
  for (std::size_t m = 0; m < nodes.lambda.size(); ++m) {
    const double l = nodes.lambda[m];
    s += nodes.weight[m] * std::cos(l * t) / (1.0 + c * l * l * l);
  }
  return s / kPi + r_tail(t, c, cutoff);
}

namespace {

// R and int_0^t R at t = j * step, j = 0..n, from the lambda quadrature;
// e^{i lambda t} advances by rotation, re-anchored every 64 steps.
void tabulate(const LambdaNodes &nodes, const std::vector<double> &a,
              const std::vector<double> &b, double step, std::size_t n, std::vector<double> &r,
              std::vector<double> &cum) {
  const std::size_t m = nodes.lambda.size();
  std::vector<double> cr(m), sr(m), zr(m), zi(m);
  for (std::size_t k = 0; k < m; ++k) {
    cr[k] = std::cos(nodes.lambda[k] * step);
    sr[k] = std::sin(nodes.lambda[k] * step);
  }
  r.assign(n + 1, 0.0);
  cum.assign(n + 1, 0.0);
  constexpr std::size_t kAnchor = 64;
  for (std::size_t j = 0; j <= n; ++j) {
    if (j % kAnchor == 0) {
      const double t = static_cast<double>(j) * step;
      for (std::size_t k = 0; k < m; ++k) {
        zr[k] = std::cos(nodes.lambda[k] * t);
        zi[k] = std::sin(nodes.lambda[k] * t);
      }
    }
    double rs = 0.0, cs = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      rs += a[k] * zr[k];
      cs += b[k] * zi[k];
    }
    r[j] = rs;
    cum[j] = cs;
    for (std::size_t k = 0; k < m; ++k) {
      const double nr = zr[k] * cr[k] - zi[k] * sr[k];
      zi[k] = zr[k] * sr[k] + zi[k] * cr[k];
      zr[k] = nr;
    }
  }
}

// Catmull-Rom through nodes k-1 .. k+2 of an even function, reflected at 0.
double catmull_rom_even(const std::vector<double> &v, double f) {
  const auto k = static_cast<long>(f);
  const double x = f - static_cast<double>(k);
  const auto last = static_cast<long>(v.size()) - 1;
  const auto node = [&](long j) { return v[static_cast<std::size_t>(std::min(std::abs(j), last))]; };
  const double p0 = node(k - 1), p1 = node(k), p2 = node(k + 1), p3 = node(k + 2);
  return p1 + 0.5 * x * (p2 - p0 + x * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                         x * (3.0 * (p1 - p2) + p3 - p0)));
}

// Six-point Lagrange through nodes k-2 .. k+3, shifted inward at the table end.
double lagrange6(const std::vector<double> &v, double f) {
  const auto last = static_cast<long>(v.size()) - 1;
  const long first = std::clamp(static_cast<long>(f) - 2, 0L, last - 5);
  const double x = f - static_cast<double>(first);
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) {
    double w = 1.0;
    for (int j = 0; j < 6; ++j)
      if (j != i) w *= (x - j) / static_cast<double>(i - j);
    sum += w * v[static_cast<std::size_t>(first + i)];
  }
  return sum;
}

// Cubic Hermite for the primitive on a uniform grid with known derivative.
double hermite(const std::vector<double> &cum, const std::vector<double> &r, double step,
               double t) {
  auto k = static_cast<std::size_t>(t / step);
  k = std::min(k, cum.size() - 2);
  const double x = t / step - static_cast<double>(k);
  const double x2 = x * x, x3 = x2 * x;
  const double h00 = 2.0 * x3 - 3.0 * x2 + 1.0;
  const double h10 = x3 - 2.0 * x2 + x;
  const double h01 = -2.0 * x3 + 3.0 * x2;
  const double h11 = x3 - x2;
  return h00 * cum[k] + h10 * step * r[k] + h01 * cum[k + 1] + h11 * step * r[k + 1];
}

// R behaves like t^2 log|t| at the origin, which interpolation on the main
// grid resolves poorly; the first few cells get a finer table.
constexpr std::size_t kFineCells = 8;
constexpr std::size_t kFineRefine = 64;

}  // namespace

ResponseTable::ResponseTable(double rho_eff, double kappa, double lambda_max,
                             std::size_t quad_points, double t_max)
    : c_(response_coefficient(kappa, rho_eff)),
      lambda_(effective_lambda_max(c_, lambda_max)),
      dt_(1.0 / static_cast<double>(quad_points)) {
  auto n = static_cast<std::size_t>(std::ceil(t_max / dt_));
  n = std::max<std::size_t>(n + n % 2, 2 * kFineCells);  // even interval count for Simpson
  t_max_ = static_cast<double>(n) * dt_;
  // Eight Gauss nodes per panel; a phase change of pi/2 per panel is ample.
  const double panel = std::min(4.0 * dt_, kPi / (2.0 * t_max_));
  const LambdaNodes nodes = lambda_nodes(lambda_, panel);
  const std::size_t m = nodes.lambda.size();

  std::vector<double> a(m), b(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double l = nodes.lambda[k];
    a[k] = nodes.weight[k] / (kPi * (1.0 + c_ * l * l * l));
    b[k] = a[k] / l;
  }
  tabulate(nodes, a, b, dt_, n, r_, cum_);
  fine_dt_ = dt_ / static_cast<double>(kFineRefine);
  tabulate(nodes, a, b, fine_dt_, kFineCells * kFineRefine, r_fine_, cum_fine_);
  const auto add_tails = [&](double step, std::vector<double> &r, std::vector<double> &cum) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double t = static_cast<double>(j) * step;
      r[j] += r_tail(t, c_, lambda_);
      cum[j] += cumulative_tail(t, c_, lambda_);
    }
  };
  add_tails(dt_, r_, cum_);
  add_tails(fine_dt_, r_fine_, cum_fine_);
}

double ResponseTable::value(double t) const {
  const double at = std::abs(t);
  if (at >= t_max_) return -6.0 * c_ / (kPi * at * at * at * at);
  if (at < static_cast<double>(kFineCells - 2) * dt_) return catmull_rom_even(r_fine_, at / fine_dt_);
  return lagrange6(r_, at / dt_);
}

double ResponseTable::cumulative(double t) const {
  const double sign = t < 0.0 ? -1.0 : 1.0;
  const double at = std::abs(t);
  if (at >= t_max_) return sign * (0.5 + 2.0 * c_ / (kPi * at * at * at));
  if (at < static_cast<double>(kFineCells) * dt_) return sign * hermite(cum_fine_, r_fine_, fine_dt_, at);
  return sign * hermite(cum_, r_, dt_, at);
}

double ResponseTable::total_mass() const {
  const std::size_t n = r_.size() - 1;
  double s = r_[0] + r_[n];
  for (std::size_t j = 1; j < n; ++j) s += (j % 2 ? 4.0 : 2.0) * r_[j];
  const double half = s * dt_ / 3.0;
  const double tail = -2.0 * c_ / (kPi * t_max_ * t_max_ * t_max_);
  return 2.0 * (half + tail);
}

namespace {

// Quadrature nodes in u carrying weight * h_l(u).
struct KernelNodes {
  std::vector<double> u;
  std::vector<double> wh;
  double scale = 1.0;  // 1 / |grad phi|
  double reach = 0.0;  // max |u| / |grad phi|
};

KernelNodes kernel_nodes(const Tangency &t, const DtbConfig &cfg) {
  KernelNodes kn;
  const double support = tangency_kernel_support(t.dalpha, cfg);
  const double h = 1.0 / static_cast<double>(cfg.quad_points);
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * support / h));
  const double ph = 2.0 * support / static_cast<double>(panels);
  const auto &rule = detail::gauss_legendre(4);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = -support + (static_cast<double>(p) + 0.5) * ph;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = mid + 0.5 * ph * rule.nodes[k];
      const double hv = tangency_kernel(u, t.dalpha, cfg);
      if (hv == 0.0) continue;
      kn.u.push_back(u);
      kn.wh.push_back(0.5 * ph * rule.weights[k] * hv);
    }
  }
  kn.scale = 1.0 / t.grad_norm;
  kn.reach = support * kn.scale;
  return kn;
}

double upsilon_from(const KernelNodes &kn, const ResponseTable &table, double r) {
  double s = 0.0;
  for (std::size_t i = 0; i < kn.u.size(); ++i) {
    const double ul = kn.u[i] * kn.scale;
    s += kn.wh[i] * (table.cumulative(ul + r) - table.cumulative(ul));
  }
  return s;
}

double max_abs(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double upsilon_l(double r, const Tangency &t, double rho_eff, const DtbConfig &cfg) {
  cfg.validate();
  const KernelNodes kn = kernel_nodes(t, cfg);
  const ResponseTable table(rho_eff, cfg.kappa, cfg.lambda_max, cfg.quad_points,
                            kn.reach + std::abs(r) + 2.0);
  return upsilon_from(kn, table, r);
}

double DtbCurve::at(double r) const {
  if (r_values.empty()) throw std::logic_error("DtbCurve::at on an empty curve");
  if (r <= r_values.front()) return upsilon.front();
  if (r >= r_values.back()) return upsilon.back();
  const auto it = std::upper_bound(r_values.begin(), r_values.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - r_values.begin()) - 1;
  const double x = (r - r_values[k]) / (r_values[k + 1] - r_values[k]);
  return upsilon[k] + x * (upsilon[k + 1] - upsilon[k]);
}

std::vector<std::string> resonance_warnings(const std::vector<Tangency> &fan, double mu) {
  std::vector<std::string> out;
  for (std::size_t l = 0; l < fan.size(); ++l) {
    const double x = mu * fan[l].dalpha;
    for (int q = 1; q <= 10; ++q) {
      const double p = std::round(x * q);
      if (std::abs(x - p / q) < 1e-6) {
        std::ostringstream os;
        os << "tangency " << l << ": mu * dphi/dalpha = " << x << " is close to the rational "
           << p << "/" << q << "; the limit profile may not be reached";
        out.push_back(os.str());
        break;
      }
    }
  }
  return out;
}

DtbCurve combined_dtb(const std::vector<Tangency> &fan, const DtbConfig &cfg) {
  if (fan.empty()) throw std::invalid_argument("combined_dtb: empty tangency fan");
  cfg.validate();

  DtbCurve curve;
  curve.fan = fan;
  curve.r_values = cfg.r_grid;
  curve.warnings = resonance_warnings(fan, cfg.mu);
  for (const Tangency &t : fan) curve.rho_eff += t.nu_l;

  std::vector<KernelNodes> nodes;
  double reach = 0.0;
  for (const Tangency &t : fan) {
    nodes.push_back(kernel_nodes(t, cfg));
    reach = std::max(reach, nodes.back().reach);
  }
  const ResponseTable table(curve.rho_eff, cfg.kappa, cfg.lambda_max, cfg.quad_points,
                            reach + max_abs(cfg.r_grid) + 2.0);

  const std::size_t nr = cfg.r_grid.size();
  curve.terms.assign(fan.size(), std::vector<double>(nr, 0.0));
  curve.upsilon.assign(nr, 0.0);
  parallel_for(nr, [&](std::size_t i) {
    double num = 0.0;
    for (std::size_t l = 0; l < fan.size(); ++l) {
      const double v = upsilon_from(nodes[l], table, cfg.r_grid[i]);
      curve.terms[l][i] = v;
      num += fan[l].nu_l * v;
    }
    curve.upsilon[i] = num / curve.rho_eff;
  });
  return curve;
}

}  // namespace grt

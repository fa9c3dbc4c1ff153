#include "grt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "grt/errors.hpp"

namespace grt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fd_step(Vec2 x) { return 1e-5 * std::max(1.0, norm(x)); }

// d2f(e, e) from central differences of the gradient along e.
template <typename Grad>
double second_directional(const Grad &grad, Vec2 x, Vec2 e) {
  const double h = fd_step(x);
  const Vec2 he = (grad(x + h * e) - grad(x - h * e)) / (2.0 * h);
  return dot(e, he);
}

}  // namespace

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

double angular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

GrtModel circular_grt(double center_radius) {
  const double R = center_radius;
  GrtModel m;
  m.name = "circular";
  m.kind = ModelKind::circular;
  m.center_radius = R;
  m.phi = [R](Vec2 x, double a) { return norm(x - R * unit_direction(a)); };
  m.weight = [](Vec2, DataPoint) { return 1.0; };
  m.grad_x_phi = [R](Vec2 x, double a) { return normalized(x - R * unit_direction(a)); };
  m.dalpha_phi = [R](Vec2 x, double a) {
    const Vec2 theta = normalized(x - R * unit_direction(a));
    return -R * dot(theta, perp(unit_direction(a)));
  };
  m.grad_x_dalpha_phi = [R](Vec2 x, double a) {
    const Vec2 d = x - R * unit_direction(a);
    const double rho = norm(d);
    const Vec2 theta = d / rho;
    const Vec2 ap = perp(unit_direction(a));
    return -(R / rho) * (ap - dot(theta, ap) * theta);
  };
  m.curve = [R](DataPoint y) -> CurvePath { return CirclePath{R * unit_direction(y.alpha), y.p}; };
  m.p_min = 0.0;
  m.p_max = 2.0 * R;
  m.unit_weight = true;
  return m;
}

GrtModel classical_radon() {
  GrtModel m;
  m.name = "classical_radon";
  m.kind = ModelKind::classical_radon;
  m.phi = [](Vec2 x, double a) { return dot(unit_direction(a), x); };
  m.weight = [](Vec2, DataPoint) { return 1.0; };
  m.grad_x_phi = [](Vec2, double a) { return unit_direction(a); };
  m.dalpha_phi = [](Vec2 x, double a) { return dot(perp(unit_direction(a)), x); };
  m.grad_x_dalpha_phi = [](Vec2, double a) { return perp(unit_direction(a)); };
  m.curve = [](DataPoint y) -> CurvePath {
    const Vec2 n = unit_direction(y.alpha);
    return LinePath{y.p * n, perp(n)};
  };
  m.p_min = -std::numeric_limits<double>::infinity();
  m.p_max = std::numeric_limits<double>::infinity();
  m.unit_weight = true;
  return m;
}

double delta_phi(const GrtModel &model, Vec2 x, double alpha) {
  return cross(model.grad_x_phi(x, alpha), model.grad_x_dalpha_phi(x, alpha));
}

double curvature_of_curve(const GrtModel &model, Vec2 x, double alpha) {
  const Vec2 g = model.grad_x_phi(x, alpha);
  const double gn = norm(g);
  if (gn < 1e-12) throw ModelViolation("curvature_of_curve: vanishing gradient of phi");
  const Vec2 e = perp(g / gn);
  const auto grad = [&](Vec2 p) { return model.grad_x_phi(p, alpha); };
  return -second_directional(grad, x, e) / gn;
}

double curvature_of_boundary(const Phantom &phantom, Vec2 x) {
  const Vec2 g = phantom.grad_h(x);
  const double gn = norm(g);
  if (gn < 1e-12) throw ModelViolation("curvature_of_boundary: vanishing gradient of H");
  const Vec2 e = perp(g / gn);
  return -second_directional(phantom.grad_h, x, e) / gn;
}

Tangency make_tangency(const GrtModel &model, const Phantom &phantom, Vec2 x0, double alpha,
                       double p) {
  Tangency t;
  t.alpha_l = wrap_angle(alpha);
  t.p_l = p;
  const Vec2 g = model.grad_x_phi(x0, t.alpha_l);
  t.grad_norm = norm(g);
  t.theta_l = g / t.grad_norm;
  if (dot(t.theta_l, phantom.grad_h(x0)) < 0.0) t.theta_l = -t.theta_l;
  t.dalpha = model.dalpha_phi(x0, t.alpha_l);
  t.delta_phi = delta_phi(model, x0, t.alpha_l);
  const double w = model.weight(x0, DataPoint{t.alpha_l, p});
  t.nu_l = w * w * t.grad_norm / std::abs(t.delta_phi);
  return t;
}

std::vector<Tangency> find_tangencies_by_scan(const GrtModel &model, const Phantom &phantom,
                                              Vec2 x0) {
  const Vec2 e = perp(phantom.normal(x0));
  const auto residual = [&](double a) { return dot(normalized(model.grad_x_phi(x0, a)), e); };

  constexpr std::size_t kScan = 4096;
  const double da = kTwoPi / static_cast<double>(kScan);
  std::vector<double> roots;
  double a_prev = 0.0;
  double r_prev = residual(a_prev);
  for (std::size_t k = 1; k <= kScan; ++k) {
    const double a = static_cast<double>(k) * da;
    const double r = residual(a);
    if (r_prev == 0.0) {
      roots.push_back(a_prev);
    } else if (r_prev * r < 0.0) {
      double lo = a_prev, hi = a, r_lo = r_prev;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double r_mid = residual(mid);
        if (r_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((r_mid < 0.0) == (r_lo < 0.0)) {
          lo = mid;
          r_lo = r_mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a_prev = a;
    r_prev = r;
  }

  std::vector<Tangency> out;
  for (double a : roots) {
    const double aw = wrap_angle(a);
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Tangency &t) {
      return angular_distance(t.alpha_l, aw) < 1e-9;
    });
    if (dup) continue;
    const double p = model.phi(x0, aw);
    if (!(p > model.p_min && p < model.p_max)) continue;
    out.push_back(make_tangency(model, phantom, x0, aw, p));
  }
  return out;
}

std::vector<Tangency> find_tangencies(const GrtModel &model, const Phantom &phantom, Vec2 x0) {
  if (std::abs(phantom.h(x0)) > 1e-10)
    throw ModelViolation("find_tangencies: x0 is not on the jump curve");

  if (model.kind != ModelKind::circular || !phantom.disk) {
    return find_tangencies_by_scan(model, phantom, x0);
  }

  // Circle centers on the normal line x_c + t beta0 at distance R from the origin.
  const Disk &disk = *phantom.disk;
  const double R = model.center_radius;
  const Vec2 beta = normalized(x0 - disk.center);
  const double b = dot(disk.center, beta);
  const double c = dot(disk.center, disk.center) - R * R;
  const double disc = b * b - c;
  if (disc <= 0.0) return {};
  const double sq = std::sqrt(disc);
  const double t_hi = -b + sq;
  const double t_lo = -b - sq;

  std::vector<Tangency> out;
  for (double t : {t_hi, t_lo}) {
    const Vec2 center = disk.center + t * beta;
    const double alpha = std::atan2(center.y, center.x);
    const double rho = std::abs(t - disk.radius);
    if (!(rho > 0.0)) continue;
    out.push_back(make_tangency(model, phantom, x0, alpha, rho));
  }
  return out;
}

CurvatureGap check_curvature_gap(const GrtModel &model, const Phantom &phantom,
                                 const Tangency &t, Vec2 x0) {
  CurvatureGap g;
  g.kappa_boundary = curvature_of_boundary(phantom, x0);
  const double orient =
      dot(phantom.grad_h(x0), model.grad_x_phi(x0, t.alpha_l)) < 0.0 ? -1.0 : 1.0;
  g.kappa_curve = orient * curvature_of_curve(model, x0, t.alpha_l);
  g.gap = g.kappa_boundary - g.kappa_curve;
  if (g.gap < 0.0) {
    g.flipped = true;
    g.gap = -g.gap;
    g.kappa_boundary = -g.kappa_boundary;
    g.kappa_curve = -g.kappa_curve;
  }
  g.violation = std::abs(g.gap) < 1e-8;
  return g;
}

}  // namespace grt

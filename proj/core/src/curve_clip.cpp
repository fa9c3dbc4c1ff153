#include "curve_clip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace grt::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<ArcInterval> clip_line(const LinePath &line, const Box &box) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const auto slab = [&](double q, double d, double mn, double mx) {
    if (d == 0.0) {
      if (q < mn || q > mx) hi = lo - 1.0;
      return;
    }
    double a = (mn - q) / d;
    double b = (mx - q) / d;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  };
  slab(line.point.x, line.direction.x, box.x_min, box.x_max);
  slab(line.point.y, line.direction.y, box.y_min, box.y_max);
  if (!(hi > lo)) return {};
  return {{lo, hi}};
}

std::vector<ArcInterval> clip_circle(const CirclePath &c, const Box &box) {
  const double rho = c.radius;
  if (!(rho > 0.0)) return {};
  std::vector<double> angles{0.0, kTwoPi};
  const auto add_cos = [&](double v) {
    const double q = (v - c.center.x) / rho;
    if (std::abs(q) < 1.0) {
      const double a = std::acos(q);
      angles.push_back(a);
      angles.push_back(kTwoPi - a);
    }
  };
  const auto add_sin = [&](double v) {
    const double q = (v - c.center.y) / rho;
    if (std::abs(q) < 1.0) {
      const double a = std::asin(q);
      angles.push_back(a < 0.0 ? a + kTwoPi : a);
      angles.push_back(std::numbers::pi - a);
    }
  };
  add_cos(box.x_min);
  add_cos(box.x_max);
  add_sin(box.y_min);
  add_sin(box.y_max);
  std::sort(angles.begin(), angles.end());

  std::vector<ArcInterval> out;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    const double a = angles[k], b = angles[k + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    if (!box.contains(c.center + rho * unit_direction(mid))) continue;
    if (!out.empty() && out.back().hi == a * rho) {
      out.back().hi = b * rho;
    } else {
      out.push_back({a * rho, b * rho});
    }
  }
  // Join the pieces meeting at angle 0.
  if (out.size() >= 2 && out.front().lo == 0.0 && out.back().hi == kTwoPi * rho) {
    out.front().lo = out.back().lo - kTwoPi * rho;
    out.pop_back();
  }
  return out;
}

}  // namespace

Vec2 point_at(const CurvePath &curve, double s) {
  if (const auto *line = std::get_if<LinePath>(&curve)) return line->point + s * line->direction;
  const auto &c = std::get<CirclePath>(curve);
  return c.center + c.radius * unit_direction(s / c.radius);
}

std::vector<ArcInterval> clip_to_box(const CurvePath &curve, const Box &box) {
  if (const auto *line = std::get_if<LinePath>(&curve)) return clip_line(*line, box);
  return clip_circle(std::get<CirclePath>(curve), box);
}

std::vector<double> disk_crossings(const CurvePath &curve, const Disk &disk) {
  std::vector<double> out;
  if (const auto *line = std::get_if<LinePath>(&curve)) {
    const Vec2 q = line->point - disk.center;
    const double b = dot(q, line->direction);
    const double c = dot(q, q) - disk.radius * disk.radius;
    const double disc = b * b - c;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      out.push_back(-b - sq);
      out.push_back(-b + sq);
    }
    return out;
  }
  const auto &circ = std::get<CirclePath>(curve);
  const Vec2 D = disk.center - circ.center;
  const double d = norm(D);
  const double rho = circ.radius;
  if (d == 0.0 || rho == 0.0) return out;
  const double q = (rho * rho + d * d - disk.radius * disk.radius) / (2.0 * rho * d);
  if (std::abs(q) >= 1.0) return out;
  const double phi = std::atan2(D.y, D.x);
  const double a = std::acos(q);
  for (double theta : {phi - a, phi + a}) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    out.push_back(w * rho);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double period(const CurvePath &curve) {
  if (const auto *c = std::get_if<CirclePath>(&curve)) return kTwoPi * c->radius;
  return 0.0;
}

}  // namespace grt::detail

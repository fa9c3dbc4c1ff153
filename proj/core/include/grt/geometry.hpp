#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "grt/phantom.hpp"
#include "grt/vec2.hpp"

namespace grt {

/// Data point y = (alpha, p).
struct DataPoint {
  double alpha = 0.0;
  double p = 0.0;
};

/// Straight integration curve {point + s * direction}, direction unit length.
struct LinePath {
  Vec2 point;
  Vec2 direction;
};

/// Circular integration curve.
struct CirclePath {
  Vec2 center;
  double radius;
};

using CurvePath = std::variant<LinePath, CirclePath>;

enum class ModelKind { circular, classical_radon, custom };

/// A generalized Radon transform: integration curves S_(alpha,p) = {x : phi(x, alpha) = p}
/// with weight W. Derivatives are supplied analytically.
struct GrtModel {
  std::string name;
  ModelKind kind = ModelKind::custom;
  std::function<double(Vec2, double)> phi;
  std::function<double(Vec2, DataPoint)> weight;
  std::function<Vec2(Vec2, double)> grad_x_phi;
  std::function<double(Vec2, double)> dalpha_phi;
  std::function<Vec2(Vec2, double)> grad_x_dalpha_phi;
  /// Parametric form of S_(alpha,p), used for curve integration.
  std::function<CurvePath(DataPoint)> curve;
  double p_min = 0.0;
  double p_max = 0.0;
  /// W == 1 and |grad_x phi| == 1 everywhere; projectors skip the
  /// per-sample weight evaluation.
  bool unit_weight = false;
  /// Distance of the circle centers from the origin (circular model only).
  double center_radius = 0.0;
};

/// Circles of radius p centered at R (cos alpha, sin alpha), W == 1.
GrtModel circular_grt(double center_radius);

/// Lines {x : (cos alpha, sin alpha) . x = p}, W == 1.
GrtModel classical_radon();

/// det[grad_x phi; grad_x dphi/dalpha] at (x, alpha).
double delta_phi(const GrtModel &model, Vec2 x, double alpha);

/// Signed curvature -d2phi(e, e) / |grad phi| of S_(alpha, phi(x, alpha)) at x,
/// e the unit tangent. The Hessian comes from central differences of grad_x_phi.
double curvature_of_curve(const GrtModel &model, Vec2 x, double alpha);

/// Same convention for the jump curve S = {H = 0}.
double curvature_of_boundary(const Phantom &phantom, Vec2 x);

/// Data point whose curve S_(alpha_l, p_l) is tangent to S at x0, with the
/// quantities the DTB predictor needs.
struct Tangency {
  double alpha_l = 0.0;
  double p_l = 0.0;
  /// grad_x phi / |grad_x phi|, oriented so that theta_l . grad H(x0) > 0.
  Vec2 theta_l;
  double grad_norm = 0.0;
  double dalpha = 0.0;
  double delta_phi = 0.0;
  /// W^2 |grad_x phi| / |delta_phi|.
  double nu_l = 0.0;
};

/// All tangencies at x0 in S. Uses the closed form for circular models with
/// disk phantoms and a scan + bisection in alpha otherwise. Empty when x0 is
/// not visible.
std::vector<Tangency> find_tangencies(const GrtModel &model, const Phantom &phantom, Vec2 x0);

/// Generic alpha-scan path regardless of model kind (2pi/4096 scan, bisection to 1e-12).
std::vector<Tangency> find_tangencies_by_scan(const GrtModel &model, const Phantom &phantom,
                                              Vec2 x0);

/// Fills the derived fields of a tangency at (x0, alpha, p).
Tangency make_tangency(const GrtModel &model, const Phantom &phantom, Vec2 x0, double alpha,
                       double p);

struct CurvatureGap {
  /// kappa_S - kappa_{S_y} in the consistent orientation, made nonnegative by
  /// the joint flip H -> -H, phi -> -phi.
  double gap = 0.0;
  double kappa_boundary = 0.0;
  double kappa_curve = 0.0;
  bool flipped = false;
  /// |gap| < 1e-8: tangency of order higher than one.
  bool violation = false;
};

CurvatureGap check_curvature_gap(const GrtModel &model, const Phantom &phantom,
                                 const Tangency &t, Vec2 x0);

/// Angle wrapped into [0, 2pi).
double wrap_angle(double a);
/// Smallest absolute difference of two angles modulo 2pi.
double angular_distance(double a, double b);

}  // namespace grt

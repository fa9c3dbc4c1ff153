#pragma once

// Arc-length parameterization of integration curves and their intersections
// with boxes and disks. Shared by data synthesis and the projector.

#include <vector>

#include "grt/geometry.hpp"
#include "grt/phantom.hpp"

namespace grt::detail {

struct ArcInterval {
  double lo;
  double hi;
};

/// Point at arc length s. Circles start at angle 0 and run counter-clockwise.
Vec2 point_at(const CurvePath &curve, double s);

/// Disjoint arc-length intervals on which the curve lies in the box, sorted.
/// Circle intervals may start below 0 when they wrap through angle 0.
std::vector<ArcInterval> clip_to_box(const CurvePath &curve, const Box &box);

/// Arc-length values where the curve crosses the disk boundary, in [0, 2 pi rho)
/// for circles.
std::vector<double> disk_crossings(const CurvePath &curve, const Disk &disk);

/// Full period of a closed curve, 0 for lines.
double period(const CurvePath &curve);

}  // namespace grt::detail

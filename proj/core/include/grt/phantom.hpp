#pragma once

#include <functional>
#include <optional>

#include "grt/grids.hpp"
#include "grt/vec2.hpp"

namespace grt {

struct Box {
  double x_min, x_max, y_min, y_max;
  bool contains(Vec2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

struct Disk {
  Vec2 center;
  double radius;
};

/// Piecewise-constant image with a smooth jump curve S = {H = 0}.
/// H < 0 inside; `jump` is the change of value across S in the +grad H
/// direction, i.e. outside - inside.
struct Phantom {
  std::function<double(Vec2)> h;
  std::function<Vec2(Vec2)> grad_h;
  double inside_value = 1.0;
  double outside_value = 0.0;
  double jump = -1.0;
  /// f vanishes outside this box; outside_value applies only within it.
  std::optional<Box> support;
  /// Set for disk phantoms; enables closed-form data and tangencies.
  std::optional<Disk> disk;

  /// f(x). On S itself the mean of the two levels is returned.
  double value(Vec2 x) const;
  /// Unit outward normal grad H / |grad H|.
  Vec2 normal(Vec2 x) const;
};

Phantom disk_phantom(Vec2 center, double radius, double inside, double outside);

/// Point of the disk boundary at polar angle beta.
Vec2 disk_boundary_point(const Disk &disk, double beta);

/// Nodal sampling of the phantom (no anti-aliasing).
Image rasterize(const Phantom &phantom, const ImageGrid &grid);

}  // namespace grt

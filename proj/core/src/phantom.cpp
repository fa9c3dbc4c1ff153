#include "grt/phantom.hpp"

#include <cmath>

#include "grt/errors.hpp"

namespace grt {

double Phantom::value(Vec2 x) const {
  if (support && !support->contains(x)) return 0.0;
  const double hv = h(x);
  if (hv < 0.0) return inside_value;
  if (hv > 0.0) return outside_value;
  return 0.5 * (inside_value + outside_value);
}

Vec2 Phantom::normal(Vec2 x) const { return normalized(grad_h(x)); }

Phantom disk_phantom(Vec2 center, double radius, double inside, double outside) {
  if (!(radius > 0.0)) throw ConfigError("disk_phantom: radius must be positive");
  Phantom ph;
  ph.h = [center, radius](Vec2 x) { return norm(x - center) - radius; };
  ph.grad_h = [center](Vec2 x) {
    const Vec2 d = x - center;
    const double n = norm(d);
    return n > 0.0 ? d / n : Vec2{1.0, 0.0};
  };
  ph.inside_value = inside;
  ph.outside_value = outside;
  ph.jump = outside - inside;
  ph.disk = Disk{center, radius};
  return ph;
}

Vec2 disk_boundary_point(const Disk &disk, double beta) {
  return disk.center + disk.radius * unit_direction(beta);
}

Image rasterize(const Phantom &phantom, const ImageGrid &grid) {
  Image img(grid);
  for (std::size_t j = 0; j < grid.n_y; ++j)
    for (std::size_t i = 0; i < grid.n_x; ++i) img.at(i, j) = phantom.value(grid.node(i, j));
  return img;
}

}  // namespace grt

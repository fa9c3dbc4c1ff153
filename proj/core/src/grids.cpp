#include "grt/grids.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "grt/errors.hpp"

namespace grt {

bool SinogramGrid::periodic_alpha() const {
  const double span = d_alpha * static_cast<double>(n_alpha);
  return std::abs(span - 2.0 * std::numbers::pi) < 1e-9;
}

void SinogramGrid::validate() const {
  if (n_alpha == 0 || n_p == 0) throw ConfigError("sinogram grid: n_alpha and n_p must be positive");
  if (!(d_alpha > 0.0) || !(d_p > 0.0))
    throw ConfigError("sinogram grid: d_alpha and d_p must be positive");
  if (d_alpha * static_cast<double>(n_alpha) > 2.0 * std::numbers::pi + 1e-9)
    throw ConfigError("sinogram grid: alpha samples overlap (n_alpha * d_alpha > 2 pi)");
}

bool operator==(const SinogramGrid &a, const SinogramGrid &b) {
  return a.n_alpha == b.n_alpha && a.n_p == b.n_p && a.alpha0 == b.alpha0 &&
         a.d_alpha == b.d_alpha && a.p0 == b.p0 && a.d_p == b.d_p;
}

SinogramGrid full_scan_grid(std::size_t n_alpha, std::size_t n_p, double p_min, double p_max) {
  if (n_alpha == 0 || n_p < 2) throw ConfigError("full_scan_grid: need n_alpha >= 1 and n_p >= 2");
  if (!(p_max > p_min)) throw ConfigError("full_scan_grid: p_max must exceed p_min");
  SinogramGrid g;
  g.n_alpha = n_alpha;
  g.n_p = n_p;
  g.alpha0 = 0.0;
  g.d_alpha = 2.0 * std::numbers::pi / static_cast<double>(n_alpha);
  g.p0 = p_min;
  g.d_p = (p_max - p_min) / static_cast<double>(n_p - 1);
  return g;
}

void ImageGrid::validate() const {
  if (n_x < 2 || n_y < 2) throw ConfigError("image grid: need at least 2 nodes per axis");
  if (!(x_max > x_min) || !(y_max > y_min)) throw ConfigError("image grid: empty rectangle");
}

bool operator==(const ImageGrid &a, const ImageGrid &b) {
  return a.n_x == b.n_x && a.n_y == b.n_y && a.x_min == b.x_min && a.x_max == b.x_max &&
         a.y_min == b.y_min && a.y_max == b.y_max;
}

ImageGrid square_grid(std::size_t n, double half_width) {
  ImageGrid g{n, n, -half_width, half_width, -half_width, half_width};
  g.validate();
  return g;
}

double Image::sample(Vec2 p) const {
  const double fx = (p.x - grid.x_min) / grid.dx();
  const double fy = (p.y - grid.y_min) / grid.dy();
  const auto ix = static_cast<std::size_t>(
      std::clamp(std::floor(fx), 0.0, static_cast<double>(grid.n_x - 2)));
  const auto iy = static_cast<std::size_t>(
      std::clamp(std::floor(fy), 0.0, static_cast<double>(grid.n_y - 2)));
  const double tx = fx - static_cast<double>(ix);
  const double ty = fy - static_cast<double>(iy);
  return (1.0 - ty) * ((1.0 - tx) * at(ix, iy) + tx * at(ix + 1, iy)) +
         ty * ((1.0 - tx) * at(ix, iy + 1) + tx * at(ix + 1, iy + 1));
}

}  // namespace grt

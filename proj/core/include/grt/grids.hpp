#pragma once

#include <cstddef>
#include <vector>

#include "grt/vec2.hpp"

namespace grt {

/// Uniform (alpha, p) sampling: alpha_j = alpha0 + j * d_alpha,
/// p_k = p0 + k * d_p. The native resolution is epsilon = d_p and the
/// angular step is mu * epsilon.
struct SinogramGrid {
  std::size_t n_alpha = 0;
  std::size_t n_p = 0;
  double alpha0 = 0.0;
  double d_alpha = 0.0;
  double p0 = 0.0;
  double d_p = 0.0;

  double alpha(std::size_t j) const { return alpha0 + static_cast<double>(j) * d_alpha; }
  double p(std::size_t k) const { return p0 + static_cast<double>(k) * d_p; }
  double p_last() const { return p(n_p - 1); }
  double epsilon() const { return d_p; }
  double mu() const { return d_alpha / d_p; }
  /// True when n_alpha steps close the full circle [0, 2pi).
  bool periodic_alpha() const;
  std::size_t size() const { return n_alpha * n_p; }
  /// Measure of one cell, used for the discrete L2(V) inner product.
  double cell_measure() const { return d_alpha * d_p; }

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

bool operator==(const SinogramGrid &a, const SinogramGrid &b);

/// Full-circle grid: alpha_j = 2 pi j / n_alpha, p spanning [p_min, p_max]
/// inclusive with n_p nodes.
SinogramGrid full_scan_grid(std::size_t n_alpha, std::size_t n_p, double p_min, double p_max);

/// Row-major samples, row = alpha index.
struct Sinogram {
  SinogramGrid grid;
  std::vector<double> values;

  Sinogram() = default;
  explicit Sinogram(const SinogramGrid &g) : grid(g), values(g.size(), 0.0) {}

  double &at(std::size_t ia, std::size_t ip) { return values[ia * grid.n_p + ip]; }
  double at(std::size_t ia, std::size_t ip) const { return values[ia * grid.n_p + ip]; }
};

/// Nodal image grid over the rectangle [x_min, x_max] x [y_min, y_max].
/// Node (i, j) sits at (x_min + i dx, y_min + j dy); the outermost ring lies
/// on the rectangle boundary.
struct ImageGrid {
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double dx() const { return (x_max - x_min) / static_cast<double>(n_x - 1); }
  double dy() const { return (y_max - y_min) / static_cast<double>(n_y - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  double y(std::size_t j) const { return y_min + static_cast<double>(j) * dy(); }
  Vec2 node(std::size_t i, std::size_t j) const { return {x(i), y(j)}; }
  std::size_t size() const { return n_x * n_y; }
  double cell_area() const { return dx() * dy(); }
  bool contains(Vec2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  bool on_boundary(std::size_t i, std::size_t j) const {
    return i == 0 || j == 0 || i + 1 == n_x || j + 1 == n_y;
  }

  void validate() const;
};

bool operator==(const ImageGrid &a, const ImageGrid &b);

/// Square grid [-half_width, half_width]^2 with n nodes per side.
ImageGrid square_grid(std::size_t n, double half_width);

/// Row-major node values, row = y index.
struct Image {
  ImageGrid grid;
  std::vector<double> values;

  Image() = default;
  explicit Image(const ImageGrid &g) : grid(g), values(g.size(), 0.0) {}

  double &at(std::size_t i, std::size_t j) { return values[j * grid.n_x + i]; }
  double at(std::size_t i, std::size_t j) const { return values[j * grid.n_x + i]; }

  /// Bilinear interpolation of the nodal values; p must lie in the grid rectangle.
  double sample(Vec2 p) const;
};

}  // namespace grt

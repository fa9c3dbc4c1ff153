#include <cmath>
#include <numbers>

#include "doctest.h"
#include "grt/phantom.hpp"

using namespace grt;

TEST_SUITE("phantom") {

TEST_CASE("disk levels and jump") {
  const Phantom ph = disk_phantom({1.0, 1.0}, 2.0, 1.0, 0.0);
  CHECK(ph.jump == -1.0);
  CHECK(ph.value({1.0, 1.0}) == 1.0);
  CHECK(ph.value({3.5, 1.0}) == 0.0);
  CHECK(ph.h({3.0, 1.0}) == doctest::Approx(0.0));
  CHECK(ph.value({3.0, 1.0}) == 0.5);
  const Phantom other = disk_phantom({0.0, 0.0}, 1.0, 0.25, 2.0);
  CHECK(other.jump == doctest::Approx(1.75));
}

TEST_CASE("boundary points and normals") {
  const Phantom ph = disk_phantom({1.0, 1.0}, 2.0, 1.0, 0.0);
  for (double beta = -3.0; beta < 3.2; beta += 0.1) {
    const Vec2 x = disk_boundary_point(*ph.disk, beta);
    CHECK(std::abs(ph.h(x)) < 1e-12);
    const Vec2 n = ph.normal(x);
    CHECK(n.x == doctest::Approx(std::cos(beta)));
    CHECK(n.y == doctest::Approx(std::sin(beta)));
  }
}

TEST_CASE("support box") {
  Phantom ph = disk_phantom({0.0, 0.0}, 1.0, 1.0, 0.3);
  ph.support = Box{-2.0, 2.0, -2.0, 2.0};
  CHECK(ph.value({1.5, 0.0}) == 0.3);
  CHECK(ph.value({2.5, 0.0}) == 0.0);
}

TEST_CASE("rasterized disk area") {
  const Phantom ph = disk_phantom({1.0, 1.0}, 2.0, 1.0, 0.0);
  const Image img = rasterize(ph, square_grid(801, 3.7));
  double sum = 0.0;
  for (double v : img.values) sum += v;
  const double area = sum * img.grid.cell_area();
  CHECK(std::abs(area - 4.0 * std::numbers::pi) / (4.0 * std::numbers::pi) < 0.02);
}

TEST_CASE("rasterize edge cases") {
  const Phantom flat = disk_phantom({0.0, 0.0}, 1.0, 0.7, 0.7);
  for (double v : rasterize(flat, square_grid(11, 2.0)).values) CHECK(v == 0.7);
  const Phantom ph = disk_phantom({0.0, 0.0}, 1.0, 1.0, 0.0);
  const Image tiny = rasterize(ph, square_grid(3, 0.5));
  CHECK(tiny.at(1, 1) == 1.0);
}

}

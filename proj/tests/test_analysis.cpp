#include <cmath>
#include <numbers>

#include "doctest.h"
#include "grt/analysis.hpp"
#include "grt/errors.hpp"
#include "grt/phantom.hpp"

using namespace grt;

namespace {

DtbCurve ramp_curve() {
  DtbCurve c;
  c.r_values = uniform_axis(-8.0, 8.0, 0.05);
  for (double r : c.r_values) c.upsilon.push_back(0.5 * std::tanh(r));
  return c;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("profile of an affine image is exact") {
  const ImageGrid g = square_grid(51, 2.0);
  Image img(g);
  for (std::size_t j = 0; j < g.n_y; ++j)
    for (std::size_t i = 0; i < g.n_x; ++i) img.at(i, j) = 0.5 + 2.0 * g.x(i) - g.y(j);
  const Vec2 x0{0.3, -0.2};
  const Vec2 th = normalized(Vec2{1.0, 2.0});
  const std::vector<double> xs{-3.0, -1.0, 0.0, 2.5};
  const auto prof = extract_profile(img, x0, th, 0.1, xs);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const Vec2 p = x0 + 0.1 * xs[k] * th;
    CHECK(prof[k] == doctest::Approx(0.5 + 2.0 * p.x - p.y).epsilon(1e-13));
  }
}

TEST_CASE("profile outside the image is an error") {
  const Image img(square_grid(11, 1.0));
  CHECK_THROWS_AS(extract_profile(img, {0.9, 0.0}, {1.0, 0.0}, 0.1, {0.0, 5.0}), ConfigError);
}

TEST_CASE("prediction reproduces a matching measurement") {
  const DtbCurve c = ramp_curve();
  std::vector<double> meas;
  for (double r : c.r_values) meas.push_back(0.4 - 1.0 * 0.5 * std::tanh(r));
  const ProfileReport rep = compare(c.r_values, meas, c, -1.0, -5.0, 5.0);
  CHECK(rep.baseline == doctest::Approx(0.4));
  CHECK(rep.max_abs_dev < 1e-12);
  CHECK(rep.rms_dev < 1e-12);
  CHECK(rep.window_samples == 201);
}

TEST_CASE("a step profile is far from the smooth prediction") {
  // Rasterized phantom along the normal: a sharp step.
  const Phantom ph = disk_phantom({1.0, 1.0}, 2.0, 1.0, 0.0);
  const Image img = rasterize(ph, square_grid(401, 3.7));
  const Vec2 x0 = disk_boundary_point(*ph.disk, -0.17 * std::numbers::pi);
  const DtbCurve c = ramp_curve();
  const auto meas = extract_profile(img, x0, ph.normal(x0), 0.046, c.r_values);
  // The step sits within one pixel of the origin.
  CHECK(meas.front() == doctest::Approx(1.0));
  CHECK(meas.back() == doctest::Approx(0.0));
  const double pixel_in_eps = 2 * 3.7 / 400 / 0.046;
  for (std::size_t k = 0; k < c.r_values.size(); ++k) {
    if (c.r_values[k] < -pixel_in_eps - 1e-9) CHECK(meas[k] == doctest::Approx(1.0));
    if (c.r_values[k] > pixel_in_eps + 1e-9) CHECK(meas[k] == doctest::Approx(0.0));
  }
  const ProfileReport rep = compare(c.r_values, meas, c, ph.jump, -5.0, 5.0);
  CHECK(rep.rms_dev > 0.05);
}

TEST_CASE("degenerate window") {
  const DtbCurve c = ramp_curve();
  std::vector<double> meas(c.r_values.size(), 0.0);
  for (std::size_t k = 0; k < meas.size(); ++k) meas[k] = std::sin(c.r_values[k]);
  const ProfileReport rep = compare(c.r_values, meas, c, -1.0, 0.0, 0.0);
  CHECK(rep.window_samples == 1);
  CHECK(rep.max_abs_dev == 0.0);
  CHECK(rep.rms_dev == 0.0);
}

TEST_CASE("comparison input checks") {
  const DtbCurve c = ramp_curve();
  std::vector<double> meas(c.r_values.size(), 0.0);
  CHECK_THROWS(compare({1.0, 2.0}, {0.0, 0.0}, c, -1.0, 1.0, 2.0));
  CHECK_THROWS(compare(c.r_values, {0.0}, c, -1.0, -1.0, 1.0));
}

}

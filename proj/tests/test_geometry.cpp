#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "grt/errors.hpp"
#include "grt/geometry.hpp"
#include "grt/phantom.hpp"
#include "oracles.hpp"

using namespace grt;
using std::numbers::pi;

namespace {

// det of [grad_x phi; grad_x dphi/dalpha] built only from phi values.
double delta_phi_fd(const GrtModel &m, Vec2 x, double a) {
  const double h = 1e-4, k = 1e-4;
  const auto phi = [&](double dx, double dy, double da) { return m.phi({x.x + dx, x.y + dy}, a + da); };
  const Vec2 g{(phi(h, 0, 0) - phi(-h, 0, 0)) / (2 * h), (phi(0, h, 0) - phi(0, -h, 0)) / (2 * h)};
  const auto mixed = [&](double ex, double ey) {
    return (phi(h * ex, h * ey, k) - phi(h * ex, h * ey, -k) - phi(-h * ex, -h * ey, k) +
            phi(-h * ex, -h * ey, -k)) /
           (4 * h * k);
  };
  const Vec2 gd{mixed(1, 0), mixed(0, 1)};
  return g.x * gd.y - g.y * gd.x;
}

struct EdgeSetup {
  GrtModel model = circular_grt(10.0);
  Phantom phantom = disk_phantom({1.0, 1.0}, 2.0, 1.0, 0.0);
  double beta0 = -0.17 * pi;
  Vec2 x0 = disk_boundary_point(*phantom.disk, beta0);
  // |x_c + t beta0| = R
  std::pair<double, double> t = oracle::quadratic_roots(
      Vec2{1.0, 1.0}.x * std::cos(beta0) + Vec2{1.0, 1.0}.y * std::sin(beta0), 2.0 - 100.0);
};

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("delta_phi: circular model at the origin") {
  // Theta = (-1, 0), dphi/dalpha = 0, grad dphi/dalpha = (0, -1).
  const GrtModel m = circular_grt(10.0);
  CHECK(delta_phi(m, {0.0, 0.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(delta_phi_fd(m, {0.0, 0.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("delta_phi: classical Radon is one everywhere") {
  const GrtModel m = classical_radon();
  auto g = oracle::rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0), a(0.0, 2 * pi);
  for (int k = 0; k < 50; ++k) CHECK(delta_phi(m, {u(g), u(g)}, a(g)) == doctest::Approx(1.0));
}

TEST_CASE("delta_phi: analytic matches finite differences of phi") {
  auto g = oracle::rng(7);
  std::uniform_real_distribution<double> u(-3.7, 3.7), a(0.0, 2 * pi);
  for (const GrtModel &m : {circular_grt(10.0), classical_radon()}) {
    for (int k = 0; k < 200; ++k) {
      const Vec2 x{u(g), u(g)};
      const double al = a(g);
      const double want = delta_phi_fd(m, x, al);
      CHECK(std::abs(delta_phi(m, x, al) - want) / std::abs(want) < 1e-6);
    }
  }
}

TEST_CASE("analytic derivatives of the circular model") {
  const GrtModel m = circular_grt(10.0);
  auto g = oracle::rng(9);
  std::uniform_real_distribution<double> u(-3.7, 3.7), a(0.0, 2 * pi);
  for (int k = 0; k < 50; ++k) {
    const Vec2 x{u(g), u(g)};
    const double al = a(g);
    const double d = oracle::central([&](double s) { return m.phi(x, s); }, al, 1e-5);
    CHECK(m.dalpha_phi(x, al) == doctest::Approx(d).epsilon(1e-8));
    const double gx = oracle::central([&](double s) { return m.phi({s, x.y}, al); }, x.x, 1e-5);
    CHECK(m.grad_x_phi(x, al).x == doctest::Approx(gx).epsilon(1e-8));
    CHECK(norm(m.grad_x_phi(x, al)) == doctest::Approx(1.0));
  }
}

TEST_CASE("curve curvature") {
  const GrtModel m = circular_grt(10.0);
  const Vec2 x{1.0, -2.0};
  const double alpha = 0.4;
  const double rho = norm(x - 10.0 * unit_direction(alpha));
  CHECK(std::abs(curvature_of_curve(m, x, alpha)) == doctest::Approx(1.0 / rho).epsilon(1e-8));
  CHECK(std::abs(curvature_of_curve(classical_radon(), x, alpha)) < 1e-8);
  const Phantom ph = disk_phantom({1.0, 1.0}, 2.0, 1.0, 0.0);
  const Vec2 xb = disk_boundary_point(*ph.disk, 0.3);
  CHECK(std::abs(curvature_of_boundary(ph, xb)) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("tangencies at the reference boundary point") {
  const EdgeSetup s;
  CHECK(s.t.first == doctest::Approx(9.5541).epsilon(1e-5));
  CHECK(s.t.second == doctest::Approx(-10.2575).epsilon(1e-5));

  const auto fan = find_tangencies(s.model, s.phantom, s.x0);
  REQUIRE(fan.size() == 2);
  const double rho1 = s.t.first - 2.0, rho2 = 2.0 - s.t.second;
  CHECK(std::abs(fan[0].p_l - rho1) < 1e-6);
  CHECK(std::abs(fan[1].p_l - rho2) < 1e-6);
  CHECK(fan[0].p_l == doctest::Approx(7.5541).epsilon(1e-5));
  CHECK(fan[1].p_l == doctest::Approx(12.2575).epsilon(1e-5));

  for (std::size_t l = 0; l < 2; ++l) {
    const Tangency &t = fan[l];
    const double tl = l == 0 ? s.t.first : s.t.second;
    // alpha_l from x_c + t_l beta0 = R alpha_l
    const Vec2 on_circle = Vec2{1.0, 1.0} + tl * unit_direction(s.beta0);
    CHECK(angular_distance(t.alpha_l, std::atan2(on_circle.y, on_circle.x)) < 1e-9);
    CHECK(std::abs(s.model.phi(s.x0, t.alpha_l) - t.p_l) < 1e-10);
    const Vec2 tangent = perp(s.phantom.normal(s.x0));
    CHECK(std::abs(dot(t.theta_l, tangent)) < 1e-8);
    CHECK(dot(t.theta_l, s.phantom.grad_h(s.x0)) > 0.0);
    CHECK(t.nu_l > 0.0);
    CHECK(std::abs(t.nu_l - 1.0 / std::abs(delta_phi(s.model, s.x0, t.alpha_l))) < 1e-10);
    const Vec2 theta = normalized(s.model.grad_x_phi(s.x0, t.alpha_l));
    CHECK(-10.0 * dot(unit_direction(t.alpha_l), theta) ==
          doctest::Approx((s.t.first - s.t.second) / 2.0).epsilon(1e-10));
  }
}

TEST_CASE("scan path agrees with the closed form") {
  const EdgeSetup s;
  const auto closed = find_tangencies(s.model, s.phantom, s.x0);
  const auto scanned = find_tangencies_by_scan(s.model, s.phantom, s.x0);
  REQUIRE(scanned.size() == closed.size());
  for (const Tangency &c : closed) {
    bool found = false;
    for (const Tangency &t : scanned)
      if (angular_distance(t.alpha_l, c.alpha_l) < 1e-9 && std::abs(t.p_l - c.p_l) < 1e-8)
        found = true;
    CHECK(found);
  }
}

TEST_CASE("classical Radon: two opposite tangencies") {
  const GrtModel m = classical_radon();
  const Phantom ph = disk_phantom({0.5, -0.3}, 1.2, 1.0, 0.0);
  const double beta = 2.1;
  const Vec2 x0 = disk_boundary_point(*ph.disk, beta);
  const auto fan = find_tangencies(m, ph, x0);
  REQUIRE(fan.size() == 2);
  const double a0 = fan[0].alpha_l, a1 = fan[1].alpha_l;
  CHECK(angular_distance(a0, a1) == doctest::Approx(pi));
  CHECK((angular_distance(a0, beta) < 1e-9 || angular_distance(a1, beta) < 1e-9));
  CHECK(std::abs(fan[0].dalpha + fan[1].dalpha) < 1e-10);
  CHECK(std::abs(fan[0].dalpha) > 0.0);
  for (const Tangency &t : fan) CHECK(t.nu_l == doctest::Approx(1.0));
}

TEST_CASE("tangency search rejects points off the boundary") {
  const Phantom ph = disk_phantom({1.0, 1.0}, 2.0, 1.0, 0.0);
  CHECK_THROWS_AS(find_tangencies(circular_grt(10.0), ph, Vec2{1.0, 1.0}), ModelViolation);
}

TEST_CASE("curvature gap") {
  const EdgeSetup s;
  const auto fan = find_tangencies(s.model, s.phantom, s.x0);
  REQUIRE(fan.size() == 2);
  // S_y1 touches the disk from outside, S_y2 encloses it.
  const CurvatureGap g1 = check_curvature_gap(s.model, s.phantom, fan[0], s.x0);
  const CurvatureGap g2 = check_curvature_gap(s.model, s.phantom, fan[1], s.x0);
  CHECK(g1.gap == doctest::Approx(0.5 + 1.0 / fan[0].p_l).epsilon(1e-7));
  CHECK(g2.gap == doctest::Approx(0.5 - 1.0 / fan[1].p_l).epsilon(1e-7));
  CHECK_FALSE(g1.violation);
  CHECK_FALSE(g2.violation);

  const Phantom ph = disk_phantom({0.5, -0.3}, 1.2, 1.0, 0.0);
  const Vec2 x0 = disk_boundary_point(*ph.disk, 0.7);
  for (const Tangency &t : find_tangencies(classical_radon(), ph, x0))
    CHECK(check_curvature_gap(classical_radon(), ph, t, x0).gap ==
          doctest::Approx(1.0 / 1.2).epsilon(1e-7));

  // Boundary identical to an integration circle.
  const Phantom same = disk_phantom({10.0, 0.0}, 3.0, 1.0, 0.0);
  const Vec2 xs{7.0, 0.0};
  const Tangency t = make_tangency(s.model, same, xs, 0.0, 3.0);
  const CurvatureGap gs = check_curvature_gap(s.model, same, t, xs);
  CHECK(std::abs(gs.gap) < 1e-8);
  CHECK(gs.violation);
}

TEST_CASE("angle helpers") {
  CHECK(wrap_angle(-0.5) == doctest::Approx(2 * pi - 0.5));
  CHECK(wrap_angle(2 * pi) == doctest::Approx(0.0));
  CHECK(angular_distance(0.1, 2 * pi - 0.1) == doctest::Approx(0.2));
}

}

#include <cmath>
#include <random>

#include "doctest.h"
#include "grt/parallel.hpp"
#include "grt/recon.hpp"
#include "grt/sampling.hpp"
#include "oracles.hpp"

using namespace grt;

namespace {

constexpr double kHalf = 3.7;
const double kSpan = 3.7 * std::sqrt(2.0);

SinogramGrid circular_grid(std::size_t na, std::size_t np) {
  return full_scan_grid(na, np, 10.0 - kSpan, 10.0 + kSpan);
}

Image random_image(const ImageGrid &g, std::uint64_t seed, bool zero_ring) {
  Image img(g);
  auto r = oracle::rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t j = 0; j < g.n_y; ++j)
    for (std::size_t i = 0; i < g.n_x; ++i)
      img.at(i, j) = zero_ring && g.on_boundary(i, j) ? 0.0 : u(r);
  return img;
}

Sinogram random_sinogram(const SinogramGrid &g, std::uint64_t seed) {
  Sinogram s(g);
  auto r = oracle::rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double &v : s.values) v = u(r);
  return s;
}

// Identity map between a 4x4 image and a 4x4 "sinogram" with unit cells.
class IdentityOp final : public LinearOperator {
 public:
  IdentityOp() : image_(square_grid(4, 1.5)), data_{4, 4, 0.0, 1.0, 0.0, 1.0} {}
  const ImageGrid &image_grid() const override { return image_; }
  const SinogramGrid &data_grid() const override { return data_; }
  void apply(const Image &img, Sinogram &out) const override {
    out = Sinogram(data_);
    out.values = img.values;
  }
  void apply_adjoint(const Sinogram &s, Image &out) const override {
    out = Image(image_);
    out.values = s.values;
  }
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

 private:
  ImageGrid image_;
  SinogramGrid data_;
};

double rel_dot_gap(const LinearOperator &op, std::uint64_t seed) {
  const Image f = random_image(op.image_grid(), seed, false);
  const Sinogram g = random_sinogram(op.data_grid(), seed + 1000);
  const double lhs = inner_v(op.apply(f), g);
  const double rhs = inner_u(f, op.apply_adjoint(g));
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

TEST_SUITE("recon") {

TEST_CASE("matched adjoint: circular model") {
  const GrtProjector op(circular_grt(10.0), square_grid(32, kHalf), circular_grid(64, 64));
  for (std::uint64_t s = 1; s <= 10; ++s) CHECK(rel_dot_gap(op, s) < 1e-10);
}

TEST_CASE("matched adjoint: classical Radon and a stored matrix") {
  const GrtProjector lines(classical_radon(), square_grid(24, 1.0),
                           full_scan_grid(40, 35, -1.5, 1.5));
  for (std::uint64_t s = 1; s <= 5; ++s) CHECK(rel_dot_gap(lines, s) < 1e-10);
  GrtProjector stored(circular_grt(10.0), square_grid(32, kHalf), circular_grid(64, 64));
  REQUIRE(stored.cache_matrix(std::size_t{1} << 30));
  for (std::uint64_t s = 1; s <= 5; ++s) CHECK(rel_dot_gap(stored, s) < 1e-10);
}

TEST_CASE("forward of a constant image is the clipped arc length") {
  // f == 1 on the grid: bilinear interpolation is exact, so every ray sees
  // the length of its curve inside the square up to the quadrature error.
  const ImageGrid ig = square_grid(41, 1.0);
  Image one(ig);
  std::fill(one.values.begin(), one.values.end(), 1.0);
  const GrtProjector op(classical_radon(), ig, full_scan_grid(8, 9, -0.8, 0.8));
  const Sinogram s = op.apply(one);
  Phantom box = disk_phantom({0.0, 0.0}, 10.0, 1.0, 1.0);
  box.support = Box{-1.0, 1.0, -1.0, 1.0};
  for (std::size_t ia = 0; ia < 8; ++ia)
    for (std::size_t ip = 0; ip < 9; ++ip) {
      const DataPoint y{s.grid.alpha(ia), s.grid.p(ip)};
      CHECK(s.at(ia, ip) == doctest::Approx(quadrature_ray(classical_radon(), box, y, 1e-3)).epsilon(1e-12));
    }
}

TEST_CASE("stored matrix matches on-the-fly tracing") {
  const ImageGrid ig = square_grid(40, kHalf);
  const SinogramGrid dg = circular_grid(48, 50);
  const GrtProjector traced(circular_grt(10.0), ig, dg);
  GrtProjector stored(circular_grt(10.0), ig, dg);
  REQUIRE(stored.cache_matrix(std::size_t{1} << 30));
  CHECK(stored.cached_entries() > 0);
  const Image f = random_image(ig, 3, false);
  const Sinogram a = traced.apply(f), b = stored.apply(f);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(std::abs(a.values[i] - b.values[i]) < 1e-12 * (1.0 + std::abs(a.values[i])));
  GrtProjector tiny(circular_grt(10.0), ig, dg);
  CHECK_FALSE(tiny.cache_matrix(1000));
  CHECK_FALSE(tiny.cached());
}

TEST_CASE("fused residual equals apply, subtract, adjoint") {
  const ImageGrid ig = square_grid(30, kHalf);
  const SinogramGrid dg = circular_grid(36, 40);
  const GrtProjector op(circular_grt(10.0), ig, dg);
  const Image f = random_image(ig, 8, false);
  const Sinogram d = random_sinogram(dg, 9);
  Sinogram r(dg);
  Image out(ig);
  op.normal_residual(f, d, r, out);
  Sinogram want = op.apply(f);
  for (std::size_t i = 0; i < want.values.size(); ++i) want.values[i] -= d.values[i];
  const Image back = op.apply_adjoint(want);
  for (std::size_t i = 0; i < r.values.size(); ++i) CHECK(r.values[i] == want.values[i]);
  for (std::size_t i = 0; i < out.values.size(); ++i) CHECK(out.values[i] == back.values[i]);
}

TEST_CASE("results do not depend on the thread count") {
  const ImageGrid ig = square_grid(30, kHalf);
  const SinogramGrid dg = circular_grid(36, 40);
  const GrtProjector op(circular_grt(10.0), ig, dg);
  const Image f = random_image(ig, 4, false);
  const Sinogram g = random_sinogram(dg, 5);
  set_thread_count(1);
  const Sinogram a1 = op.apply(f);
  const Image b1 = op.apply_adjoint(g);
  set_thread_count(4);
  const Sinogram a4 = op.apply(f);
  const Image b4 = op.apply_adjoint(g);
  set_thread_count(1);
  CHECK(a1.values == a4.values);
  CHECK(b1.values == b4.values);
}

TEST_CASE("discrete Laplacian of a quadratic") {
  const ImageGrid ig = square_grid(9, 1.0);
  Image q(ig);
  for (std::size_t j = 0; j < ig.n_y; ++j)
    for (std::size_t i = 0; i < ig.n_x; ++i) q.at(i, j) = ig.x(i) * ig.x(i) + 3.0 * ig.y(j) * ig.y(j);
  const Image lap = discrete_laplacian(q);
  for (std::size_t j = 1; j + 1 < ig.n_y; ++j)
    for (std::size_t i = 1; i + 1 < ig.n_x; ++i) CHECK(lap.at(i, j) == doctest::Approx(8.0));
}

TEST_CASE("gradient matches central differences of the cost") {
  const ImageGrid ig = square_grid(16, kHalf);
  const SinogramGrid dg = circular_grid(24, 30);
  const GrtProjector op(circular_grt(10.0), ig, dg);
  const Sinogram data = random_sinogram(dg, 11);
  for (bool dirichlet : {false, true}) {
    SolverConfig cfg;
    cfg.kappa = 0.5;
    cfg.epsilon = 0.3;
    cfg.dirichlet = dirichlet;
    const Image f = random_image(ig, 12, false);
    const Image g = gradient(op, f, data, cfg);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < ig.n_y; ++j) {
      for (std::size_t i = 0; i < ig.n_x; ++i) {
        if (dirichlet && ig.on_boundary(i, j)) {
          CHECK(g.at(i, j) == 0.0);
          continue;
        }
        const double h = 1e-3;
        Image fp = f, fm = f;
        fp.at(i, j) += h;
        fm.at(i, j) -= h;
        // d cost = <grad, df>_U
        const double fd = (cost(op, fp, data, cfg) - cost(op, fm, data, cfg)) / (2 * h) / ig.cell_area();
        num += (g.at(i, j) - fd) * (g.at(i, j) - fd);
        den += fd * fd;
      }
    }
    CHECK(std::sqrt(num / den) < 1e-5);
  }
}

TEST_CASE("identity toy converges in one step") {
  const IdentityOp op;
  Sinogram data(op.data_grid());
  for (std::size_t i = 0; i < data.values.size(); ++i) data.values[i] = 0.5 + 0.1 * static_cast<double>(i);
  SolverConfig cfg;
  cfg.kappa = 0.0;
  cfg.step_rule = FixedStep{0.5};
  cfg.dirichlet = false;
  cfg.max_iters = 1;
  SolveResult one = solve(op, data, cfg);
  for (std::size_t i = 0; i < data.values.size(); ++i) CHECK(one.image.values[i] == data.values[i]);
  cfg.max_iters = 50;
  SolveResult full = solve(op, data, cfg);
  CHECK(full.converged);
  CHECK(full.log.size() == 1 + cfg.stop_consecutive);
  // Hessian is 2 I.
  CHECK(estimate_lipschitz(op, cfg, 5) == doctest::Approx(2.0));
}

TEST_CASE("zero iterations return the zero image unconverged") {
  const IdentityOp op;
  Sinogram data(op.data_grid());
  std::fill(data.values.begin(), data.values.end(), 1.0);
  SolverConfig cfg;
  cfg.max_iters = 0;
  const SolveResult r = solve(op, data, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.log.empty());
  for (double v : r.image.values) CHECK(v == 0.0);
}

TEST_CASE("cost decreases monotonically with the inverse-Lipschitz step") {
  Phantom ph = disk_phantom({0.5, 0.3}, 1.5, 1.0, 0.0);
  ph.support = Box{-kHalf, kHalf, -kHalf, kHalf};
  const SinogramGrid dg = circular_grid(40, 41);
  const Sinogram data = synthesize_sinogram(circular_grt(10.0), ph, dg);
  const GrtProjector op(circular_grt(10.0), square_grid(25, kHalf), dg);
  SolverConfig cfg;
  cfg.epsilon = dg.epsilon();
  cfg.max_iters = 60;
  const SolveResult r = solve(op, data, cfg);
  REQUIRE(r.log.size() == 60);
  for (std::size_t k = 1; k < r.log.size(); ++k) CHECK(r.log[k].cost <= r.log[k - 1].cost);
  CHECK(r.log.back().cost < 0.05 * r.log.front().cost);
  // The estimate bounds the Rayleigh quotient of an arbitrary direction.
  const Image v = random_image(op.image_grid(), 6, true);
  const Sinogram zero(dg);
  const Image hv = gradient(op, v, zero, cfg);
  CHECK(inner_u(v, hv) / inner_u(v, v) <= 1.0 / r.step * (1.0 + 1e-9));
}

TEST_CASE("solver rejects invalid settings") {
  const IdentityOp op;
  Sinogram data(op.data_grid());
  SolverConfig cfg;
  cfg.stop_tol = 0.0;
  CHECK_THROWS(solve(op, data, cfg));
  cfg = SolverConfig{};
  cfg.step_rule = FixedStep{-1.0};
  CHECK_THROWS(solve(op, data, cfg));
  cfg = SolverConfig{};
  Sinogram wrong(SinogramGrid{3, 4, 0.0, 1.0, 0.0, 1.0});
  CHECK_THROWS(solve(op, wrong, cfg));
}

TEST_CASE("model overloads build the matching projector") {
  const ImageGrid ig = square_grid(20, kHalf);
  const SinogramGrid dg = circular_grid(24, 30);
  const GrtModel m = circular_grt(10.0);
  const GrtProjector op(m, ig, dg);
  const Image f = random_image(ig, 21, true);
  const Sinogram d = random_sinogram(dg, 22);
  SolverConfig cfg;
  cfg.epsilon = 0.3;
  CHECK(cost(m, f, d, cfg) == cost(op, f, d, cfg));
  CHECK(gradient(m, f, d, cfg).values == gradient(op, f, d, cfg).values);
}

}

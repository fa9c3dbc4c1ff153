#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "grt/dtb.hpp"
#include "grt/geometry.hpp"
#include "grt/kernels.hpp"
#include "grt/phantom.hpp"
#include "grt/recon.hpp"
#include "grt/sampling.hpp"

using namespace grt;

namespace {

constexpr double kHalfWidth = 3.7;

SinogramGrid dense_grid(std::size_t n_alpha, std::size_t n_p) {
  const double reach = kHalfWidth * std::sqrt(2.0);
  return full_scan_grid(n_alpha, n_p, 10.0 - reach, 10.0 + reach);
}

Phantom reference_disk() {
  Phantom ph = disk_phantom({1.0, 1.0}, 2.0, 1.0, 0.0);
  ph.support = Box{-kHalfWidth, kHalfWidth, -kHalfWidth, kHalfWidth};
  return ph;
}

void BM_KeysKernel(benchmark::State &state) {
  double t = -2.0, s = 0.0;
  for (auto _ : state) {
    s += keys_kernel_fast(t);
    t = t > 2.0 ? -2.0 : t + 1e-3;
  }
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_KeysKernel);

void BM_Synthesize(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GrtModel model = circular_grt(10.0);
  const Phantom ph = reference_disk();
  const SinogramGrid grid = dense_grid(n, n + n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_sinogram(model, ph, grid));
}
BENCHMARK(BM_Synthesize)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_Upsample(benchmark::State &state) {
  const Sinogram coarse(dense_grid(150, 226));
  const SinogramGrid dense = dense_grid(400, 601);
  const KernelSpec k = keys_kernel_spec();
  for (auto _ : state) benchmark::DoNotOptimize(upsample(coarse, k, k, dense));
}
BENCHMARK(BM_Upsample)->Unit(benchmark::kMillisecond);

// Image of n^2 nodes against a dense grid scaled like the desk setup.
struct Problem {
  ImageGrid image;
  SinogramGrid data;
  GrtProjector op;
  Image f;
  Sinogram d;

  explicit Problem(std::size_t n, bool cache)
      : image(square_grid(n, kHalfWidth)),
        data(dense_grid(n, (3 * n) / 2)),
        op(circular_grt(10.0), image, data),
        f(rasterize(reference_disk(), image)),
        d(data) {
    if (cache) op.cache_matrix(std::size_t{1} << 31);
  }
};

void BM_Forward(benchmark::State &state) {
  Problem p(static_cast<std::size_t>(state.range(0)), state.range(1) != 0);
  Sinogram out(p.data);
  for (auto _ : state) p.op.apply(p.f, out);
}
BENCHMARK(BM_Forward)->Args({101, 0})->Args({101, 1})->Args({201, 0})->Args({201, 1})
    ->Unit(benchmark::kMillisecond);

void BM_Adjoint(benchmark::State &state) {
  Problem p(static_cast<std::size_t>(state.range(0)), state.range(1) != 0);
  const Sinogram g = p.op.apply(p.f);
  Image out(p.image);
  for (auto _ : state) p.op.apply_adjoint(g, out);
}
BENCHMARK(BM_Adjoint)->Args({101, 0})->Args({101, 1})->Args({201, 0})->Args({201, 1})
    ->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State &state) {
  Problem p(static_cast<std::size_t>(state.range(0)), state.range(1) != 0);
  SolverConfig cfg;
  cfg.epsilon = p.data.epsilon();
  for (auto _ : state) benchmark::DoNotOptimize(gradient(p.op, p.f, p.d, cfg));
}
BENCHMARK(BM_Gradient)->Args({101, 0})->Args({101, 1})->Args({201, 0})->Args({201, 1})
    ->Unit(benchmark::kMillisecond);

void BM_CacheMatrix(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    GrtProjector op(circular_grt(10.0), square_grid(n, kHalfWidth), dense_grid(n, (3 * n) / 2));
    benchmark::DoNotOptimize(op.cache_matrix(std::size_t{1} << 31));
  }
}
BENCHMARK(BM_CacheMatrix)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_ResponseTable(benchmark::State &state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ResponseTable(2.0, 0.5, 400.0, 64, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_ResponseTable)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_CombinedDtb(benchmark::State &state) {
  const Phantom ph = reference_disk();
  const auto fan = find_tangencies(circular_grt(10.0), ph,
                                   disk_boundary_point(*ph.disk, -0.17 * std::numbers::pi));
  DtbConfig cfg;
  cfg.mu = 0.900584;
  for (auto _ : state) benchmark::DoNotOptimize(combined_dtb(fan, cfg));
}
BENCHMARK(BM_CombinedDtb)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

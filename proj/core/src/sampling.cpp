#include "grt/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curve_clip.hpp"
#include "grt/errors.hpp"
#include "grt/parallel.hpp"
#include "quadrature.hpp"

namespace grt {

namespace {

using detail::ArcInterval;

// int over [a, b] of W / |grad phi| along the curve.
double measure_along(const GrtModel &model, const CurvePath &curve, DataPoint y, double a,
                     double b) {
  if (model.unit_weight) return b - a;
  return detail::integrate_panel(detail::gauss_legendre(8), a, b, [&](double s) {
    const Vec2 x = detail::point_at(curve, s);
    return model.weight(x, y) / norm(model.grad_x_phi(x, y.alpha));
  });
}

Box support_box(const Phantom &phantom) {
  if (phantom.support) return *phantom.support;
  if (phantom.outside_value != 0.0)
    throw ConfigError("phantom: a nonzero outside value needs a support box");
  const Disk &d = *phantom.disk;
  return Box{d.center.x - d.radius, d.center.x + d.radius, d.center.y - d.radius,
             d.center.y + d.radius};
}

double level(const Phantom &phantom, double h) {
  return h < 0.0 ? phantom.inside_value : phantom.outside_value;
}

}  // namespace

double synthesize_ray(const GrtModel &model, const Phantom &phantom, DataPoint y) {
  if (!phantom.disk) throw ConfigError("synthesize_ray: closed form needs a disk phantom");
  const CurvePath curve = model.curve(y);
  const Box box = support_box(phantom);
  const double per = detail::period(curve);
  const std::vector<double> cross = detail::disk_crossings(curve, *phantom.disk);

  double total = 0.0;
  for (const ArcInterval &iv : detail::clip_to_box(curve, box)) {
    std::vector<double> cuts{iv.lo, iv.hi};
    for (double s : cross) {
      for (double shift : {-per, 0.0, per}) {
        const double v = s + shift;
        if (v > iv.lo && v < iv.hi) cuts.push_back(v);
        if (per == 0.0) break;
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      if (!(b > a)) continue;
      const double value = level(phantom, phantom.h(detail::point_at(curve, 0.5 * (a + b))));
      if (value != 0.0) total += value * measure_along(model, curve, y, a, b);
    }
  }
  return total;
}

double quadrature_ray(const GrtModel &model, const Phantom &phantom, DataPoint y, double step) {
  if (!phantom.support) throw ConfigError("quadrature_ray: phantom needs a support box");
  if (!(step > 0.0)) throw std::invalid_argument("quadrature_ray: step must be positive");
  const CurvePath curve = model.curve(y);
  const auto h_at = [&](double s) { return phantom.h(detail::point_at(curve, s)); };

  double total = 0.0;
  for (const ArcInterval &iv : detail::clip_to_box(curve, *phantom.support)) {
    const double len = iv.hi - iv.lo;
    const auto n = static_cast<std::size_t>(std::ceil(len / step));
    const double ds = len / static_cast<double>(n);
    double s_prev = iv.lo;
    double h_prev = h_at(s_prev);
    for (std::size_t k = 1; k <= n; ++k) {
      const double s = k == n ? iv.hi : iv.lo + static_cast<double>(k) * ds;
      const double hv = h_at(s);
      if ((h_prev < 0.0) == (hv < 0.0)) {
        total += level(phantom, h_prev) * measure_along(model, curve, y, s_prev, s);
      } else {
        // Locate the jump by bisection on the sign of H.
        double lo = s_prev, hi = s;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((h_at(mid) < 0.0) == (h_prev < 0.0)) lo = mid; else hi = mid;
        }
        const double cut = 0.5 * (lo + hi);
        total += level(phantom, h_prev) * measure_along(model, curve, y, s_prev, cut);
        total += level(phantom, hv) * measure_along(model, curve, y, cut, s);
      }
      s_prev = s;
      h_prev = hv;
    }
  }
  return total;
}

Sinogram synthesize_sinogram(const GrtModel &model, const Phantom &phantom,
                             const SinogramGrid &grid) {
  grid.validate();
  Sinogram out(grid);
  parallel_for(grid.n_alpha, [&](std::size_t ia) {
    for (std::size_t ip = 0; ip < grid.n_p; ++ip)
      out.at(ia, ip) = synthesize_ray(model, phantom, DataPoint{grid.alpha(ia), grid.p(ip)});
  });
  return out;
}

namespace {

struct Tap {
  std::size_t index;
  double weight;
};

// Kernel taps for a position u measured in coarse grid units.
std::vector<Tap> taps_for(double u, const KernelSpec &kernel, std::size_t n, bool periodic) {
  std::vector<Tap> taps;
  const auto radius = static_cast<long>(std::ceil(kernel.support_radius));
  const auto base = static_cast<long>(std::floor(u));
  const auto nl = static_cast<long>(n);
  for (long j = base - radius + 1; j <= base + radius; ++j) {
    const double w = kernel.eval(u - static_cast<double>(j));
    if (w == 0.0) continue;
    long idx = j;
    if (periodic) {
      idx = ((j % nl) + nl) % nl;
    } else if (j < 0 || j >= nl) {
      continue;
    }
    taps.push_back({static_cast<std::size_t>(idx), w});
  }
  return taps;
}

}  // namespace

Sinogram upsample(const Sinogram &coarse, const KernelSpec &kernel_alpha,
                  const KernelSpec &kernel_p, const SinogramGrid &dense) {
  const SinogramGrid &cg = coarse.grid;
  cg.validate();
  dense.validate();
  const bool periodic = cg.periodic_alpha();

  std::vector<std::vector<Tap>> p_taps(dense.n_p);
  for (std::size_t k = 0; k < dense.n_p; ++k)
    p_taps[k] = taps_for((dense.p(k) - cg.p0) / cg.d_p, kernel_p, cg.n_p, false);

  Sinogram out(dense);
  parallel_for(dense.n_alpha, [&](std::size_t ia) {
    double da = dense.alpha(ia) - cg.alpha0;
    if (periodic) {
      da = std::fmod(da, 2.0 * std::numbers::pi);
      if (da < 0.0) da += 2.0 * std::numbers::pi;
    }
    const std::vector<Tap> a_taps = taps_for(da / cg.d_alpha, kernel_alpha, cg.n_alpha, periodic);
    std::vector<double> row(cg.n_p, 0.0);
    for (const Tap &ta : a_taps)
      for (std::size_t k = 0; k < cg.n_p; ++k) row[k] += ta.weight * coarse.at(ta.index, k);
    for (std::size_t k = 0; k < dense.n_p; ++k) {
      double v = 0.0;
      for (const Tap &tp : p_taps[k]) v += tp.weight * row[tp.index];
      out.at(ia, k) = v;
    }
  });
  return out;
}

}  // namespace grt

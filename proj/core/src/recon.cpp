#include "grt/recon.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include "curve_clip.hpp"
#include "grt/errors.hpp"
#include "grt/parallel.hpp"

namespace grt {

namespace {

// Fixed number of private accumulators in the adjoint; results do not
// depend on the worker count.
constexpr std::size_t kAdjointBlocks = 8;

void zero_ring(Image &img) {
  const ImageGrid &g = img.grid;
  for (std::size_t i = 0; i < g.n_x; ++i) {
    img.at(i, 0) = 0.0;
    img.at(i, g.n_y - 1) = 0.0;
  }
  for (std::size_t j = 0; j < g.n_y; ++j) {
    img.at(0, j) = 0.0;
    img.at(g.n_x - 1, j) = 0.0;
  }
}

double regularizer(const Image &img) {
  const ImageGrid &g = img.grid;
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  double sx = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < g.n_y; ++j) {
    for (std::size_t i = 0; i <= g.n_x; ++i) {
      const double a = i < g.n_x ? img.at(i, j) : 0.0;
      const double b = i > 0 ? img.at(i - 1, j) : 0.0;
      sx += (a - b) * (a - b);
    }
  }
  for (std::size_t i = 0; i < g.n_x; ++i) {
    for (std::size_t j = 0; j <= g.n_y; ++j) {
      const double a = j < g.n_y ? img.at(i, j) : 0.0;
      const double b = j > 0 ? img.at(i, j - 1) : 0.0;
      sy += (a - b) * (a - b);
    }
  }
  return g.cell_area() * (sx * idx2 + sy * idy2);
}

double linf(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Sinogram LinearOperator::apply(const Image &img) const {
  Sinogram out(data_grid());
  apply(img, out);
  return out;
}

Image LinearOperator::apply_adjoint(const Sinogram &sino) const {
  Image out(image_grid());
  apply_adjoint(sino, out);
  return out;
}

void LinearOperator::normal_residual(const Image &img, const Sinogram &data, Sinogram &resid,
                                     Image &out) const {
  apply(img, resid);
  for (std::size_t i = 0; i < resid.values.size(); ++i) resid.values[i] -= data.values[i];
  apply_adjoint(resid, out);
}

GrtProjector::GrtProjector(GrtModel model, const ImageGrid &image, const SinogramGrid &data)
    : model_(std::move(model)), image_(image), data_(data) {
  image_.validate();
  data_.validate();
  step_ = 0.5 * std::min(image_.dx(), image_.dy());
}

template <typename Visit>
void GrtProjector::trace_ray(DataPoint y, Visit &&visit) const {
  const CurvePath curve = model_.curve(y);
  const Box box{image_.x_min, image_.x_max, image_.y_min, image_.y_max};
  const double inv_dx = 1.0 / image_.dx();
  const double inv_dy = 1.0 / image_.dy();
  const auto max_ix = static_cast<long>(image_.n_x) - 2;
  const auto max_iy = static_cast<long>(image_.n_y) - 2;
  const auto nx = static_cast<long>(image_.n_x);

  // (gx, gy) are grid coordinates; samples are interior so truncation is floor.
  const auto emit = [&](double gx, double gy, double w) {
    const long cx = std::clamp(static_cast<long>(gx), 0L, max_ix);
    const long cy = std::clamp(static_cast<long>(gy), 0L, max_iy);
    visit(static_cast<std::size_t>(cy * nx + cx), gx - static_cast<double>(cx),
          gy - static_cast<double>(cy), w);
  };
  const auto weighted = [&](double gx, double gy, double ds) {
    const Vec2 x{image_.x_min + gx * image_.dx(), image_.y_min + gy * image_.dy()};
    return ds * model_.weight(x, y) / norm(model_.grad_x_phi(x, y.alpha));
  };

  for (const detail::ArcInterval &iv : detail::clip_to_box(curve, box)) {
    const double len = iv.hi - iv.lo;
    const auto n = static_cast<std::size_t>(std::ceil(len / step_));
    if (n == 0) continue;
    const double ds = len / static_cast<double>(n);
    if (const auto *line = std::get_if<LinePath>(&curve)) {
      const Vec2 start = line->point + (iv.lo + 0.5 * ds) * line->direction;
      const double gx0 = (start.x - image_.x_min) * inv_dx;
      const double gy0 = (start.y - image_.y_min) * inv_dy;
      const double sx = ds * line->direction.x * inv_dx;
      const double sy = ds * line->direction.y * inv_dy;
      for (std::size_t k = 0; k < n; ++k) {
        const double gx = gx0 + static_cast<double>(k) * sx;
        const double gy = gy0 + static_cast<double>(k) * sy;
        emit(gx, gy, model_.unit_weight ? ds : weighted(gx, gy, ds));
      }
    } else {
      const auto &c = std::get<CirclePath>(curve);
      const double cgx = (c.center.x - image_.x_min) * inv_dx;
      const double cgy = (c.center.y - image_.y_min) * inv_dy;
      const double rx = c.radius * inv_dx;
      const double ry = c.radius * inv_dy;
      const double dtheta = ds / c.radius;
      const double cr = std::cos(dtheta), sr = std::sin(dtheta);
      // Rotation recurrence, re-anchored every 256 samples.
      constexpr std::size_t kAnchor = 256;
      double ux = 0.0, uy = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k % kAnchor == 0) {
          const double theta = (iv.lo + (static_cast<double>(k) + 0.5) * ds) / c.radius;
          ux = std::cos(theta);
          uy = std::sin(theta);
        } else {
          const double nxv = ux * cr - uy * sr;
          uy = ux * sr + uy * cr;
          ux = nxv;
        }
        const double gx = cgx + rx * ux;
        const double gy = cgy + ry * uy;
        emit(gx, gy, model_.unit_weight ? ds : weighted(gx, gy, ds));
      }
    }
  }
}

bool GrtProjector::cache_matrix(std::size_t max_bytes) {
  const std::size_t nx = image_.n_x;
  const std::size_t entry_bytes = sizeof(std::uint32_t) + sizeof(double);
  auto rows = std::make_shared<std::vector<Row>>(data_.n_alpha);
  std::atomic<std::size_t> used{0};
  std::atomic<bool> over{false};

  parallel_for(data_.n_alpha, [&](std::size_t ia) {
    if (over.load()) return;
    Row &row = (*rows)[ia];
    row.start.assign(data_.n_p + 1, 0);
    // slot[node] is the entry index of node in the current ray, or -1.
    std::vector<std::int64_t> slot(image_.size(), -1);
    const double alpha = data_.alpha(ia);
    for (std::size_t ip = 0; ip < data_.n_p; ++ip) {
      const std::size_t first = row.node.size();
      const auto add = [&](std::size_t node, double w) {
        std::int64_t &k = slot[node];
        if (k < 0) {
          k = static_cast<std::int64_t>(row.node.size());
          row.node.push_back(static_cast<std::uint32_t>(node));
          row.weight.push_back(w);
        } else {
          row.weight[static_cast<std::size_t>(k)] += w;
        }
      };
      trace_ray(DataPoint{alpha, data_.p(ip)}, [&](std::size_t idx, double tx, double ty, double w) {
        const double lo_w = w * (1.0 - ty);
        const double hi_w = w * ty;
        add(idx, lo_w * (1.0 - tx));
        add(idx + 1, lo_w * tx);
        add(idx + nx, hi_w * (1.0 - tx));
        add(idx + nx + 1, hi_w * tx);
      });
      for (std::size_t k = first; k < row.node.size(); ++k) slot[row.node[k]] = -1;
      row.start[ip + 1] = static_cast<std::uint32_t>(row.node.size());
    }
    row.node.shrink_to_fit();
    row.weight.shrink_to_fit();
    if (used.fetch_add(row.node.size() * entry_bytes) + row.node.size() * entry_bytes > max_bytes)
      over.store(true);
  });

  if (over.load()) {
    rows_.reset();
    return false;
  }
  rows_ = std::move(rows);
  return true;
}

std::size_t GrtProjector::cached_entries() const {
  if (!rows_) return 0;
  std::size_t n = 0;
  for (const Row &r : *rows_) n += r.node.size();
  return n;
}

void GrtProjector::apply(const Image &img, Sinogram &out) const {
  if (!(img.grid == image_)) throw std::invalid_argument("forward: image grid mismatch");
  if (!(out.grid == data_)) out = Sinogram(data_);
  const std::size_t nx = image_.n_x;
  const double *f = img.values.data();
  parallel_for(data_.n_alpha, [&](std::size_t ia) {
    if (rows_) {
      const Row &row = (*rows_)[ia];
      for (std::size_t ip = 0; ip < data_.n_p; ++ip) {
        double sum = 0.0;
        for (std::uint32_t k = row.start[ip]; k < row.start[ip + 1]; ++k)
          sum += row.weight[k] * f[row.node[k]];
        out.at(ia, ip) = sum;
      }
      return;
    }
    const double alpha = data_.alpha(ia);
    for (std::size_t ip = 0; ip < data_.n_p; ++ip) {
      double sum = 0.0;
      trace_ray(DataPoint{alpha, data_.p(ip)}, [&](std::size_t idx, double tx, double ty, double w) {
        const double *q = f + idx;
        const double lo = q[0] + tx * (q[1] - q[0]);
        const double hi = q[nx] + tx * (q[nx + 1] - q[nx]);
        sum += w * (lo + ty * (hi - lo));
      });
      out.at(ia, ip) = sum;
    }
  });
}

namespace {

struct Scatter {
  double *acc;
  std::size_t nx;
  void operator()(std::size_t idx, double tx, double ty, double gw) const {
    const double lo_w = gw * (1.0 - ty);
    const double hi_w = gw * ty;
    double *q = acc + idx;
    q[0] += lo_w * (1.0 - tx);
    q[1] += lo_w * tx;
    q[nx] += hi_w * (1.0 - tx);
    q[nx + 1] += hi_w * tx;
  }
};

}  // namespace

void GrtProjector::apply_adjoint(const Sinogram &sino, Image &out) const {
  if (!(sino.grid == data_)) throw std::invalid_argument("adjoint: sinogram grid mismatch");
  if (!(out.grid == image_)) out = Image(image_);
  const double scale = data_.cell_measure() / image_.cell_area();
  const std::size_t blocks = std::min(kAdjointBlocks, data_.n_alpha);
  std::vector<std::vector<double>> acc(blocks);

  parallel_for(blocks, [&](std::size_t b) {
    std::vector<double> &a = acc[b];
    a.assign(image_.size(), 0.0);
    const Scatter scatter{a.data(), image_.n_x};
    const std::size_t lo = b * data_.n_alpha / blocks;
    const std::size_t hi = (b + 1) * data_.n_alpha / blocks;
    for (std::size_t ia = lo; ia < hi; ++ia) {
      const double alpha = data_.alpha(ia);
      for (std::size_t ip = 0; ip < data_.n_p; ++ip) {
        const double g = sino.at(ia, ip) * scale;
        if (g == 0.0) continue;
        if (rows_) {
          const Row &row = (*rows_)[ia];
          for (std::uint32_t k = row.start[ip]; k < row.start[ip + 1]; ++k)
            a[row.node[k]] += g * row.weight[k];
          continue;
        }
        trace_ray(DataPoint{alpha, data_.p(ip)}, [&](std::size_t idx, double tx, double ty, double w) {
          scatter(idx, tx, ty, g * w);
        });
      }
    }
  });

  std::fill(out.values.begin(), out.values.end(), 0.0);
  for (const auto &a : acc)
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] += a[i];
}

void GrtProjector::normal_residual(const Image &img, const Sinogram &data, Sinogram &resid,
                                   Image &out) const {
  if (!(img.grid == image_)) throw std::invalid_argument("normal_residual: image grid mismatch");
  if (!(data.grid == data_)) throw std::invalid_argument("normal_residual: data grid mismatch");
  if (!(resid.grid == data_)) resid = Sinogram(data_);
  if (!(out.grid == image_)) out = Image(image_);
  const std::size_t nx = image_.n_x;
  const double *f = img.values.data();
  const double scale = data_.cell_measure() / image_.cell_area();
  const std::size_t blocks = std::min(kAdjointBlocks, data_.n_alpha);
  std::vector<std::vector<double>> acc(blocks);

  // Same block split and summation order as apply_adjoint.
  parallel_for(blocks, [&](std::size_t b) {
    std::vector<double> &a = acc[b];
    a.assign(image_.size(), 0.0);
    const Scatter scatter{a.data(), nx};
    const std::size_t lo = b * data_.n_alpha / blocks;
    const std::size_t hi = (b + 1) * data_.n_alpha / blocks;
    for (std::size_t ia = lo; ia < hi; ++ia) {
      const double alpha = data_.alpha(ia);
      for (std::size_t ip = 0; ip < data_.n_p; ++ip) {
        if (rows_) {
          const Row &row = (*rows_)[ia];
          const std::uint32_t k0 = row.start[ip], k1 = row.start[ip + 1];
          double sum = 0.0;
          for (std::uint32_t k = k0; k < k1; ++k) sum += row.weight[k] * f[row.node[k]];
          const double r = sum - data.at(ia, ip);
          resid.at(ia, ip) = r;
          const double g = r * scale;
          if (g == 0.0) continue;
          for (std::uint32_t k = k0; k < k1; ++k) a[row.node[k]] += g * row.weight[k];
          continue;
        }
        // Tracing twice is cheaper than buffering the samples.
        const DataPoint y{alpha, data_.p(ip)};
        double sum = 0.0;
        trace_ray(y, [&](std::size_t idx, double tx, double ty, double w) {
          const double *q = f + idx;
          const double lo_v = q[0] + tx * (q[1] - q[0]);
          const double hi_v = q[nx] + tx * (q[nx + 1] - q[nx]);
          sum += w * (lo_v + ty * (hi_v - lo_v));
        });
        const double r = sum - data.at(ia, ip);
        resid.at(ia, ip) = r;
        const double g = r * scale;
        if (g == 0.0) continue;
        trace_ray(y, [&](std::size_t idx, double tx, double ty, double w) {
          scatter(idx, tx, ty, g * w);
        });
      }
    }
  });

  std::fill(out.values.begin(), out.values.end(), 0.0);
  for (const auto &a : acc)
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] += a[i];
}

Sinogram forward(const GrtModel &model, const Image &img, const SinogramGrid &dense) {
  return GrtProjector(model, img.grid, dense).apply(img);
}

Image adjoint(const GrtModel &model, const Sinogram &sino, const ImageGrid &grid) {
  return GrtProjector(model, grid, sino.grid).apply_adjoint(sino);
}

void SolverConfig::validate() const {
  if (!(kappa >= 0.0)) throw ConfigError("solver.kappa must be nonnegative");
  if (!(epsilon > 0.0)) throw ConfigError("solver epsilon must be positive");
  if (!(stop_tol > 0.0)) throw ConfigError("solver.stop_tol must be positive");
  if (stop_consecutive == 0) throw ConfigError("solver.stop_consecutive must be at least 1");
  if (const auto *fs = std::get_if<FixedStep>(&step_rule); fs && !(fs->step > 0.0))
    throw ConfigError("solver.step must be positive");
}

double inner_u(const Image &a, const Image &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.grid.cell_area();
}

double inner_v(const Sinogram &a, const Sinogram &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.grid.cell_measure();
}

Image discrete_laplacian(const Image &img) {
  const ImageGrid &g = img.grid;
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  Image out(g);
  for (std::size_t j = 0; j < g.n_y; ++j) {
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double c = img.at(i, j);
      const double l = i > 0 ? img.at(i - 1, j) : 0.0;
      const double r = i + 1 < g.n_x ? img.at(i + 1, j) : 0.0;
      const double d = j > 0 ? img.at(i, j - 1) : 0.0;
      const double u = j + 1 < g.n_y ? img.at(i, j + 1) : 0.0;
      out.at(i, j) = (l - 2.0 * c + r) * idx2 + (d - 2.0 * c + u) * idy2;
    }
  }
  return out;
}

double cost(const LinearOperator &op, const Image &img, const Sinogram &data,
            const SolverConfig &cfg) {
  Sinogram r = op.apply(img);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= data.values[i];
  return inner_v(r, r) + cfg.regularization_weight() * regularizer(img);
}

namespace {

// Gradient at img; also returns the cost through `cost_out`.
void gradient_into(const LinearOperator &op, const Image &img, const Sinogram &data,
                   const SolverConfig &cfg, Sinogram &resid, Image &grad, double &cost_out) {
  op.normal_residual(img, data, resid, grad);
  const double lam = cfg.regularization_weight();
  double reg = 0.0;
  if (lam != 0.0) {
    const Image lap = discrete_laplacian(img);
    for (std::size_t i = 0; i < grad.values.size(); ++i) grad.values[i] -= lam * lap.values[i];
    reg = lam * regularizer(img);
  }
  for (double &v : grad.values) v *= 2.0;
  if (cfg.dirichlet) zero_ring(grad);
  cost_out = inner_v(resid, resid) + reg;
}

}  // namespace

Image gradient(const LinearOperator &op, const Image &img, const Sinogram &data,
               const SolverConfig &cfg) {
  Sinogram resid(op.data_grid());
  Image grad(op.image_grid());
  double c = 0.0;
  gradient_into(op, img, data, cfg, resid, grad, c);
  return grad;
}

double estimate_lipschitz(const LinearOperator &op, const SolverConfig &cfg,
                          std::size_t iterations) {
  Image v(op.image_grid());
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double &x : v.values) x = uni(rng);
  if (cfg.dirichlet) zero_ring(v);

  const Sinogram zero(op.data_grid());
  Sinogram resid(op.data_grid());
  Image hv(op.image_grid());
  double estimate = 0.0;
  for (std::size_t it = 0; it < std::max<std::size_t>(iterations, 1); ++it) {
    const double vn = std::sqrt(inner_u(v, v));
    for (double &x : v.values) x /= vn;
    double c = 0.0;
    // The gradient of the cost with zero data is the Hessian applied to v.
    gradient_into(op, v, zero, cfg, resid, hv, c);
    estimate = std::sqrt(inner_u(hv, hv));
    std::swap(v, hv);
  }
  return estimate;
}

SolveResult solve(const LinearOperator &op, const Sinogram &data, const SolverConfig &cfg) {
  cfg.validate();
  if (!(data.grid == op.data_grid())) throw ConfigError("solve: data grid does not match operator");

  SolveResult res;
  res.image = Image(op.image_grid());
  if (const auto *fs = std::get_if<FixedStep>(&cfg.step_rule)) {
    res.step = fs->step;
  } else {
    const auto &il = std::get<InverseLipschitz>(cfg.step_rule);
    res.step = 1.0 / estimate_lipschitz(op, cfg, il.power_iterations);
  }

  Sinogram resid(op.data_grid());
  Image grad(op.image_grid());
  std::size_t quiet = 0;
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    double c = 0.0;
    gradient_into(op, res.image, data, cfg, resid, grad, c);
    for (double &g : grad.values) g *= res.step;
    const double upd = linf(grad.values);
    for (std::size_t i = 0; i < grad.values.size(); ++i) res.image.values[i] -= grad.values[i];
    res.log.push_back({it, c, upd, res.step});
    quiet = upd < cfg.stop_tol ? quiet + 1 : 0;
    if (quiet >= cfg.stop_consecutive) {
      res.converged = true;
      break;
    }
  }
  return res;
}

SolveResult solve(const GrtModel &model, const Sinogram &data, const ImageGrid &grid,
                  const SolverConfig &cfg) {
  const GrtProjector op(model, grid, data.grid);
  return solve(op, data, cfg);
}

double cost(const GrtModel &model, const Image &img, const Sinogram &data,
            const SolverConfig &cfg) {
  return cost(GrtProjector(model, img.grid, data.grid), img, data, cfg);
}

Image gradient(const GrtModel &model, const Image &img, const Sinogram &data,
               const SolverConfig &cfg) {
  return gradient(GrtProjector(model, img.grid, data.grid), img, data, cfg);
}

}  // namespace grt

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "grt/geometry.hpp"
#include "grt/grids.hpp"

namespace grt {

/// Linear map from images to sinograms with its adjoint under the weighted
/// inner products <f, g>_U = dx dy sum f g and <a, b>_V = d_alpha d_p sum a b.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual const ImageGrid &image_grid() const = 0;
  virtual const SinogramGrid &data_grid() const = 0;
  virtual void apply(const Image &img, Sinogram &out) const = 0;
  virtual void apply_adjoint(const Sinogram &sino, Image &out) const = 0;
  /// resid = A img - data and out = A* resid. Overridable to trace rays once.
  virtual void normal_residual(const Image &img, const Sinogram &data, Sinogram &resid,
                               Image &out) const;

  Sinogram apply(const Image &img) const;
  Image apply_adjoint(const Sinogram &sino) const;
};

/// Discrete GRT: for every ray the clipped curve S_y is sampled at the
/// midpoints of arc-length panels of length <= min(dx, dy) / 2, each sample
/// contributing panel * W / |grad phi| times the bilinear image value.
/// The adjoint scatters with the same weights, so it is the exact transpose.
class GrtProjector final : public LinearOperator {
 public:
  GrtProjector(GrtModel model, const ImageGrid &image, const SinogramGrid &data);

  const ImageGrid &image_grid() const override { return image_; }
  const SinogramGrid &data_grid() const override { return data_; }
  const GrtModel &model() const { return model_; }
  double quadrature_step() const { return step_; }

  /// Stores the merged per-ray node weights so later applications skip the
  /// curve tracing. Keeps tracing on the fly and returns false if the matrix
  /// would need more than max_bytes.
  bool cache_matrix(std::size_t max_bytes);
  bool cached() const { return rows_ != nullptr; }
  std::size_t cached_entries() const;

  void apply(const Image &img, Sinogram &out) const override;
  void apply_adjoint(const Sinogram &sino, Image &out) const override;
  void normal_residual(const Image &img, const Sinogram &data, Sinogram &resid,
                       Image &out) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

 private:
  struct Row {
    std::vector<std::uint32_t> start;  // n_p + 1 offsets
    std::vector<std::uint32_t> node;
    std::vector<double> weight;
  };

  template <typename Visit>
  void trace_ray(DataPoint y, Visit &&visit) const;

  GrtModel model_;
  ImageGrid image_;
  SinogramGrid data_;
  double step_;
  std::shared_ptr<const std::vector<Row>> rows_;
};

Sinogram forward(const GrtModel &model, const Image &img, const SinogramGrid &dense);
Image adjoint(const GrtModel &model, const Sinogram &sino, const ImageGrid &grid);

struct FixedStep {
  double step = 1.0;
};
/// Step 1 / L with L estimated by power iteration on the Hessian.
struct InverseLipschitz {
  std::size_t power_iterations = 30;
};
using StepRule = std::variant<FixedStep, InverseLipschitz>;

struct SolverConfig {
  double kappa = 0.5;
  double epsilon = 1.0;
  StepRule step_rule = InverseLipschitz{};
  double stop_tol = 1e-6;
  std::size_t stop_consecutive = 3;
  std::size_t max_iters = 2000;
  /// Keep the outer ring of nodes at zero (H_0^1 setting).
  bool dirichlet = true;

  void validate() const;
  double regularization_weight() const { return kappa * epsilon * epsilon * epsilon; }
};

/// Psi(f) = ||A f - data||_V^2 + kappa eps^3 ||grad_h f||_U^2 with forward
/// differences and zero padding outside the grid.
double cost(const LinearOperator &op, const Image &img, const Sinogram &data,
            const SolverConfig &cfg);

/// Gradient of cost w.r.t. <.,.>_U: 2 (A*(A f - data) - kappa eps^3 Lap_h f).
/// The boundary ring is zeroed in the Dirichlet setting.
Image gradient(const LinearOperator &op, const Image &img, const Sinogram &data,
               const SolverConfig &cfg);
/// Same with a projector built for img.grid and data.grid.
double cost(const GrtModel &model, const Image &img, const Sinogram &data,
            const SolverConfig &cfg);
Image gradient(const GrtModel &model, const Image &img, const Sinogram &data,
               const SolverConfig &cfg);

/// 5-point Laplacian with zero padding outside the grid.
Image discrete_laplacian(const Image &img);

/// Largest eigenvalue estimate of v -> 2 (A*A v - kappa eps^3 Lap_h v).
double estimate_lipschitz(const LinearOperator &op, const SolverConfig &cfg,
                          std::size_t iterations);

struct IterationRecord {
  std::size_t iter = 0;
  /// Cost at the iterate before the update.
  double cost = 0.0;
  double update_linf = 0.0;
  double step = 0.0;
};

struct SolveResult {
  Image image;
  std::vector<IterationRecord> log;
  bool converged = false;
  double step = 0.0;
};

/// Gradient descent from f = 0. Stops when the L-infinity norm of the update
/// stays below stop_tol for stop_consecutive iterations, or after max_iters.
SolveResult solve(const LinearOperator &op, const Sinogram &data, const SolverConfig &cfg);
SolveResult solve(const GrtModel &model, const Sinogram &data, const ImageGrid &grid,
                  const SolverConfig &cfg);

/// Inner products used throughout.
double inner_u(const Image &a, const Image &b);
double inner_v(const Sinogram &a, const Sinogram &b);

}  // namespace grt

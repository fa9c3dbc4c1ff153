#pragma once

#include <filesystem>
#include <string>

#include "grt/dtb.hpp"
#include "grt/geometry.hpp"
#include "grt/grids.hpp"
#include "grt/phantom.hpp"
#include "grt/recon.hpp"

namespace grt::app {

enum class StepKind { inverse_lipschitz, fixed };

/// Everything one experiment needs. The text form is a flat list of
/// `section.key = value` lines; `#` starts a comment.
struct ExperimentConfig {
  std::string model_kind = "circular";  // circular | classical_radon
  double center_radius = 10.0;

  double disk_x = 1.0;
  double disk_y = 1.0;
  double disk_radius = 2.0;
  double inside = 1.0;
  double outside = 0.0;
  /// Boundary point angle in units of pi.
  double beta0_pi = -0.17;

  std::size_t image_n = 801;
  double half_width = 3.7;

  std::size_t coarse_n_alpha = 300;
  std::size_t coarse_n_p = 451;
  std::size_t dense_n_alpha = 800;
  std::size_t dense_n_p = 1201;

  std::string kernel_alpha = "keys";
  std::string kernel_p = "keys";

  double kappa = 0.5;
  StepKind step_kind = StepKind::inverse_lipschitz;
  double fixed_step = 1.0;
  std::size_t power_iterations = 30;
  double stop_tol = 1e-6;
  std::size_t stop_consecutive = 3;
  std::size_t max_iters = 1000;
  bool dirichlet = true;
  /// Memory budget for the stored projection matrix; 0 traces rays every time.
  std::size_t cache_mb = 2560;

  double lambda_max = 400.0;
  std::size_t quad_points = 64;
  double r_min = -8.0;
  double r_max = 8.0;
  double r_step = 0.05;

  double window_lo = -5.0;
  double window_hi = 5.0;
  std::size_t global_samples = 801;

  std::string output_dir = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;

  GrtModel model() const;
  Phantom phantom() const;
  Vec2 boundary_point() const;
  /// Unit outward normal at the boundary point.
  Vec2 profile_direction() const;
  ImageGrid image_grid() const;
  SinogramGrid coarse_grid() const;
  SinogramGrid dense_grid() const;
  SolverConfig solver_config() const;
  DtbConfig dtb_config() const;
};

/// Parses the text form over the defaults. Unknown keys, duplicates and
/// malformed values raise ConfigError.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &path);

/// Complete text form; parse_config(to_text(c)) reproduces c exactly.
std::string to_text(const ExperimentConfig &cfg);
void save_config(const std::filesystem::path &path, const ExperimentConfig &cfg);

}  // namespace grt::app

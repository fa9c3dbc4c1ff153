#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "grt/errors.hpp"
#include "grt/io.hpp"
#include "grt/kernels.hpp"
#include "grt/sampling.hpp"
#include "svg_plot.hpp"

namespace grt::app {

namespace fs = std::filesystem;

namespace {

void prepare(const ExperimentConfig &cfg, const RunOptions &opt) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw IoError("cannot create '" + opt.out_dir.string() + "': " + ec.message());
  ExperimentConfig effective = cfg;
  effective.output_dir = opt.out_dir.string();
  save_config(opt.out_dir / artifact::effective_config, effective);
}

template <typename... Args>
void say(const RunOptions &opt, const Args &...args) {
  if (!opt.log) return;
  (*opt.log << ... << args) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Parameter range of the line c + s * dir inside the image square.
std::pair<double, double> line_span(Vec2 c, Vec2 dir, double hw) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto &[ci, di] : {std::pair{c.x, dir.x}, std::pair{c.y, dir.y}}) {
    if (std::abs(di) < 1e-15) continue;
    const double a = (-hw - ci) / di, b = (hw - ci) / di;
    lo = std::max(lo, std::min(a, b));
    hi = std::min(hi, std::max(a, b));
  }
  return {lo, hi};
}

}  // namespace

Sinogram cmd_simulate(const ExperimentConfig &cfg, const RunOptions &opt) {
  prepare(cfg, opt);
  const SinogramGrid grid = cfg.coarse_grid();
  say(opt, "coarse grid ", grid.n_alpha, " x ", grid.n_p, "  epsilon = ", grid.epsilon(),
      "  mu = ", grid.mu());
  const Sinogram sino = synthesize_sinogram(cfg.model(), cfg.phantom(), grid);
  write_sinogram(opt.out_dir / artifact::sinogram, sino);
  write_sinogram_csv(opt.out_dir / artifact::sinogram_csv, sino);
  return sino;
}

SolveResult cmd_reconstruct(const ExperimentConfig &cfg, const RunOptions &opt,
                            const fs::path &sinogram_path) {
  prepare(cfg, opt);
  const Sinogram coarse = read_sinogram(sinogram_path);
  if (!(coarse.grid == cfg.coarse_grid()))
    throw ConfigError("sinogram '" + sinogram_path.string() +
                      "' does not match the configured coarse grid");
  const auto t0 = std::chrono::steady_clock::now();
  const Sinogram dense = upsample(coarse, kernel_by_name(cfg.kernel_alpha),
                                  kernel_by_name(cfg.kernel_p), cfg.dense_grid());
  GrtProjector op(cfg.model(), cfg.image_grid(), dense.grid);
  if (cfg.cache_mb > 0) {
    const bool stored = op.cache_matrix(cfg.cache_mb << 20);
    say(opt, stored ? "projection matrix stored, " : "projection matrix over budget, tracing, ",
        op.cached_entries(), " entries");
  }
  SolveResult res = solve(op, dense, cfg.solver_config());
  write_image(opt.out_dir / artifact::image, res.image);
  write_iteration_log(opt.out_dir / artifact::iterations, res.log);
  say(opt, res.converged ? "converged" : "not converged", " after ", res.log.size(),
      " iterations, step ", res.step, ", final cost ", res.log.empty() ? 0.0 : res.log.back().cost,
      ", ", seconds_since(t0), " s");
  return res;
}

DtbCurve predict_curve(const ExperimentConfig &cfg) {
  cfg.validate();
  const Vec2 x0 = cfg.boundary_point();
  const std::vector<Tangency> fan = find_tangencies(cfg.model(), cfg.phantom(), x0);
  if (fan.empty()) throw ConfigError("phantom.beta0_pi: no data curve is tangent at the boundary point");
  return combined_dtb(fan, cfg.dtb_config());
}

DtbCurve cmd_predict(const ExperimentConfig &cfg, const RunOptions &opt) {
  prepare(cfg, opt);
  DtbCurve curve = predict_curve(cfg);
  for (const Tangency &t : curve.fan)
    say(opt, "tangency alpha = ", t.alpha_l, "  p = ", t.p_l, "  nu = ", t.nu_l);
  for (const std::string &w : curve.warnings) say(opt, "warning: ", w);
  write_dtb_csv(opt.out_dir / artifact::dtb, curve);
  write_tangencies_csv(opt.out_dir / artifact::tangencies, curve.fan);
  if (opt.plot) {
    std::vector<Series> series{{"combined", curve.r_values, curve.upsilon, "#1f77b4"}};
    const char *colors[] = {"#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
    for (std::size_t l = 0; l < curve.terms.size(); ++l)
      series.push_back({"tangency " + std::to_string(l + 1), curve.r_values, curve.terms[l],
                        colors[l % 4]});
    write_line_plot(opt.out_dir / "dtb.svg", {"Predicted transition", "r", "Upsilon"}, series);
  }
  return curve;
}

ProfileReport cmd_compare(const ExperimentConfig &cfg, const RunOptions &opt,
                          const fs::path &image_path) {
  prepare(cfg, opt);
  const Image img = read_image(image_path);
  if (!(img.grid == cfg.image_grid()))
    throw ConfigError("image '" + image_path.string() + "' does not match the configured grid");
  const DtbCurve curve = predict_curve(cfg);
  const Phantom ph = cfg.phantom();
  const Vec2 x0 = cfg.boundary_point();
  const Vec2 theta0 = cfg.profile_direction();
  const double eps = cfg.coarse_grid().epsilon();
  const std::vector<double> measured = extract_profile(img, x0, theta0, eps, curve.r_values);
  const ProfileReport rep =
      compare(curve.r_values, measured, curve, ph.jump, cfg.window_lo, cfg.window_hi);
  write_profile_csv(opt.out_dir / artifact::profile, rep);
  write_profile_metrics(opt.out_dir / artifact::metrics, rep);
  say(opt, profile_summary(rep));

  // Profile through the disk center along theta0, across the whole image.
  const Vec2 c{cfg.disk_x, cfg.disk_y};
  auto [s_lo, s_hi] = line_span(c, theta0, cfg.half_width);
  s_lo *= 1.0 - 1e-12;
  s_hi *= 1.0 - 1e-12;
  std::vector<double> s_axis(cfg.global_samples), recon(cfg.global_samples),
      truth(cfg.global_samples);
  for (std::size_t k = 0; k < cfg.global_samples; ++k) {
    const double s =
        s_lo + (s_hi - s_lo) * static_cast<double>(k) / static_cast<double>(cfg.global_samples - 1);
    s_axis[k] = s;
    recon[k] = img.sample(c + s * theta0);
    truth[k] = ph.value(c + s * theta0);
  }
  {
    std::ofstream os(opt.out_dir / artifact::global_profile);
    if (!os) throw IoError("cannot write " + std::string(artifact::global_profile));
    os.precision(17);
    os << "s,reconstruction,phantom\n";
    for (std::size_t k = 0; k < s_axis.size(); ++k)
      os << s_axis[k] << ',' << recon[k] << ',' << truth[k] << '\n';
    if (!os) throw IoError("write failed for " + std::string(artifact::global_profile));
  }

  if (opt.plot) {
    write_line_plot(opt.out_dir / "profile.svg",
                    {"Edge profile at the boundary point", "signed distance / epsilon", "f"},
                    {{"reconstruction", rep.x_check, rep.measured, "#2ca02c"},
                     {"prediction", rep.x_check, rep.predicted, "#1f77b4"}});
    write_line_plot(opt.out_dir / "global_profile.svg",
                    {"Profile through the disk center", "distance from center", "f"},
                    {{"reconstruction", s_axis, recon, "#2ca02c"},
                     {"phantom", s_axis, truth, "#7f7f7f"}});
  }
  return rep;
}

ExitCode cmd_run(const ExperimentConfig &cfg, const RunOptions &opt) {
  cmd_simulate(cfg, opt);
  const SolveResult res = cmd_reconstruct(cfg, opt, opt.out_dir / artifact::sinogram);
  cmd_predict(cfg, opt);
  cmd_compare(cfg, opt, opt.out_dir / artifact::image);
  return res.converged ? ExitCode::ok : ExitCode::not_converged;
}

ExitCode guarded(const std::function<ExitCode()> &body, std::ostream &err) {
  try {
    return body();
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return ExitCode::config_error;
  } catch (const ModelViolation &e) {
    err << "model violation: " << e.what() << '\n';
    return ExitCode::config_error;
  } catch (const IoError &e) {
    err << "i/o error: " << e.what() << '\n';
    return ExitCode::io_error;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::failure;
  }
}

}  // namespace grt::app

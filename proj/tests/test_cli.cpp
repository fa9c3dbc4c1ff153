#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "experiment_config.hpp"
#include "grt/errors.hpp"
#include "grt/io.hpp"

using namespace grt;
using namespace grt::app;
namespace fs = std::filesystem;

namespace {

// Small but complete experiment that runs in well under a second.
ExperimentConfig small_config() {
  ExperimentConfig c;
  c.disk_x = 0.5;
  c.disk_y = 0.5;
  c.disk_radius = 1.0;
  c.image_n = 41;
  c.coarse_n_alpha = 40;
  c.coarse_n_p = 61;
  c.dense_n_alpha = 60;
  c.dense_n_p = 81;
  c.max_iters = 400;
  c.stop_tol = 1e-4;
  c.cache_mb = 64;
  c.r_min = -6.0;
  c.r_max = 6.0;
  c.r_step = 0.1;
  c.window_lo = -4.0;
  c.window_hi = 4.0;
  c.global_samples = 101;
  return c;
}

fs::path fresh_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / "grt_cli_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string config_error_of(const std::string &text) {
  try {
    parse_config(text);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config text round trip") {
  ExperimentConfig c = small_config();
  c.step_kind = StepKind::fixed;
  c.fixed_step = 0.1 + 0.2;
  c.beta0_pi = -0.17;
  c.dirichlet = false;
  const std::string text = to_text(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(to_text(back) == text);
  CHECK(back.fixed_step == c.fixed_step);
  CHECK(back.beta0_pi == c.beta0_pi);
  CHECK(back.step_kind == StepKind::fixed);
  CHECK_FALSE(back.dirichlet);
  CHECK(back.image_n == 41);
}

TEST_CASE("config errors name the field") {
  CHECK(config_error_of("solver.kappa = abc").find("solver.kappa") != std::string::npos);
  CHECK(config_error_of("solver.colour = 3").find("solver.colour") != std::string::npos);
  CHECK(config_error_of("image.n = 5\nimage.n = 7").find("image.n") != std::string::npos);
  CHECK(config_error_of("image.n = -5").find("image.n") != std::string::npos);
  CHECK(config_error_of("just some words").find("line 1") != std::string::npos);
  CHECK(config_error_of("# comment only\n\nimage.n = 9  # trailing").empty());

  ExperimentConfig c = small_config();
  c.model_kind = "parabolic";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.disk_radius = 5.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.kernel_p = "sinc";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/grt.cfg"), IoError);
}

TEST_CASE("bundled configs") {
  const ExperimentConfig full = load_config(fs::path(GRT_CONFIG_DIR) / "circular_edge.cfg");
  const ExperimentConfig desk = load_config(fs::path(GRT_CONFIG_DIR) / "circular_edge_desk.cfg");
  full.validate();
  desk.validate();
  CHECK(full.coarse_grid().epsilon() == doctest::Approx(0.023256).epsilon(1e-4));
  CHECK(full.coarse_grid().mu() == doctest::Approx(0.9006).epsilon(1e-4));
  CHECK(desk.coarse_grid().epsilon() == doctest::Approx(2.0 * full.coarse_grid().epsilon()));
  CHECK(full.image_grid().n_x == 801);
  CHECK(desk.image_grid().n_x == 401);
  CHECK(full.dense_grid().n_p == 1201);
  CHECK(desk.dense_grid().n_alpha == 400);
  CHECK(full.kappa == 0.5);
  CHECK(full.solver_config().epsilon == full.coarse_grid().epsilon());
}

TEST_CASE("exit code mapping") {
  std::ostringstream err;
  CHECK(guarded([]() -> ExitCode { throw ConfigError("x"); }, err) == ExitCode::config_error);
  CHECK(guarded([]() -> ExitCode { throw IoError("x"); }, err) == ExitCode::io_error);
  CHECK(guarded([]() -> ExitCode { throw ModelViolation("x"); }, err) == ExitCode::config_error);
  CHECK(guarded([]() -> ExitCode { throw std::runtime_error("x"); }, err) == ExitCode::failure);
  CHECK(guarded([] { return ExitCode::not_converged; }, err) == ExitCode::not_converged);
  CHECK(static_cast<int>(ExitCode::config_error) == 2);
  CHECK(static_cast<int>(ExitCode::not_converged) == 3);
  CHECK(static_cast<int>(ExitCode::io_error) == 4);
}

TEST_CASE("simulate") {
  ExperimentConfig c = small_config();
  const RunOptions opt{fresh_dir("simulate")};
  const Sinogram s = cmd_simulate(c, opt);
  CHECK(fs::exists(opt.out_dir / artifact::sinogram));
  CHECK(fs::exists(opt.out_dir / artifact::sinogram_csv));
  CHECK(read_sinogram(opt.out_dir / artifact::sinogram).values == s.values);
  const ExperimentConfig written = load_config(opt.out_dir / artifact::effective_config);
  CHECK(written.output_dir == opt.out_dir.string());

  c.inside = 0.0;
  c.outside = 0.0;
  for (double v : cmd_simulate(c, opt).values) CHECK(v == 0.0);
}

TEST_CASE("predict") {
  const ExperimentConfig full = load_config(fs::path(GRT_CONFIG_DIR) / "circular_edge.cfg");
  const RunOptions opt{fresh_dir("predict")};
  const DtbCurve curve = cmd_predict(full, opt);
  REQUIRE(curve.fan.size() == 2);
  CHECK(curve.fan[0].p_l == doctest::Approx(7.5541).epsilon(1e-5));
  CHECK(curve.fan[1].p_l == doctest::Approx(12.2575).epsilon(1e-5));
  CHECK(std::abs(curve.at(0.0)) < 1e-9);
  CHECK(fs::exists(opt.out_dir / artifact::dtb));
  CHECK(fs::exists(opt.out_dir / artifact::tangencies));

  ExperimentConfig radon = small_config();
  radon.model_kind = "classical_radon";
  const DtbCurve two = predict_curve(radon);
  REQUIRE(two.fan.size() == 2);
  DtbConfig half = radon.dtb_config();
  half.kappa /= 2.0;
  const DtbCurve one = combined_dtb({two.fan[0]}, half);
  for (std::size_t k = 0; k < one.upsilon.size(); ++k)
    CHECK(std::abs(one.upsilon[k] - two.upsilon[k]) < 1e-8);
}

TEST_CASE("run writes every artifact and is deterministic") {
  const ExperimentConfig c = small_config();
  RunOptions opt{fresh_dir("run_a")};
  opt.plot = true;
  CHECK(cmd_run(c, opt) == ExitCode::ok);
  for (const char *name : {artifact::sinogram, artifact::image, artifact::iterations, artifact::dtb,
                           artifact::tangencies, artifact::profile, artifact::metrics,
                           artifact::global_profile, artifact::effective_config})
    CHECK(fs::exists(opt.out_dir / name));
  for (const char *svg : {"dtb.svg", "profile.svg", "global_profile.svg"})
    CHECK(slurp(opt.out_dir / svg).rfind("<svg", 0) == 0);

  RunOptions again{fresh_dir("run_b")};
  CHECK(cmd_run(c, again) == ExitCode::ok);
  CHECK(slurp(opt.out_dir / artifact::image) == slurp(again.out_dir / artifact::image));
  CHECK(slurp(opt.out_dir / artifact::profile) == slurp(again.out_dir / artifact::profile));

  // The effective config reproduces the run.
  const ExperimentConfig replay = load_config(opt.out_dir / artifact::effective_config);
  RunOptions third{fresh_dir("run_c")};
  CHECK(cmd_run(replay, third) == ExitCode::ok);
  CHECK(slurp(opt.out_dir / artifact::image) == slurp(third.out_dir / artifact::image));
}

TEST_CASE("non-convergence still writes artifacts") {
  ExperimentConfig c = small_config();
  c.max_iters = 0;
  const RunOptions opt{fresh_dir("noconv")};
  CHECK(cmd_run(c, opt) == ExitCode::not_converged);
  const Image img = read_image(opt.out_dir / artifact::image);
  for (double v : img.values) CHECK(v == 0.0);
  CHECK(fs::exists(opt.out_dir / artifact::metrics));
}

TEST_CASE("compare") {
  ExperimentConfig c = small_config();
  const RunOptions opt{fresh_dir("compare")};
  cmd_simulate(c, opt);
  cmd_reconstruct(c, opt, opt.out_dir / artifact::sinogram);
  c.window_lo = 0.0;
  c.window_hi = 0.0;
  const ProfileReport rep = cmd_compare(c, opt, opt.out_dir / artifact::image);
  CHECK(rep.window_samples == 1);
  CHECK(rep.max_abs_dev == 0.0);
  CHECK(rep.rms_dev == 0.0);
}

TEST_CASE("grid mismatches are config errors") {
  ExperimentConfig c = small_config();
  const RunOptions opt{fresh_dir("mismatch")};
  cmd_simulate(c, opt);
  ExperimentConfig other = c;
  other.coarse_n_p = 63;
  CHECK_THROWS_AS(cmd_reconstruct(other, opt, opt.out_dir / artifact::sinogram), ConfigError);
  write_image(opt.out_dir / "small.bin", Image(square_grid(11, 3.7)));
  CHECK_THROWS_AS(cmd_compare(c, opt, opt.out_dir / "small.bin"), ConfigError);
  CHECK_THROWS_AS(cmd_compare(c, opt, opt.out_dir / "absent.bin"), IoError);
}

}

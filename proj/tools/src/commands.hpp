#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>

#include "experiment_config.hpp"
#include "grt/analysis.hpp"
#include "grt/dtb.hpp"
#include "grt/recon.hpp"

namespace grt::app {

enum class ExitCode : int {
  ok = 0,
  failure = 1,
  config_error = 2,
  not_converged = 3,
  io_error = 4,
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  bool plot = false;
  std::ostream *log = nullptr;  // progress lines; nullptr silences them
};

/// Artifact names inside the output directory.
namespace artifact {
inline constexpr const char *sinogram = "sinogram.bin";
inline constexpr const char *sinogram_csv = "sinogram.csv";
inline constexpr const char *image = "image.bin";
inline constexpr const char *iterations = "iterations.csv";
inline constexpr const char *dtb = "dtb.csv";
inline constexpr const char *tangencies = "tangencies.csv";
inline constexpr const char *profile = "profile.csv";
inline constexpr const char *metrics = "profile_metrics.txt";
inline constexpr const char *global_profile = "global_profile.csv";
inline constexpr const char *effective_config = "effective.cfg";
}  // namespace artifact

/// Coarse data of the disk phantom; writes sinogram.bin and sinogram.csv.
Sinogram cmd_simulate(const ExperimentConfig &cfg, const RunOptions &opt);

/// Upsamples the coarse data, solves and writes image.bin and iterations.csv.
/// The caller decides what a non-converged result means.
SolveResult cmd_reconstruct(const ExperimentConfig &cfg, const RunOptions &opt,
                            const std::filesystem::path &sinogram_path);

/// Tangency fan and predicted curve without touching the filesystem.
DtbCurve predict_curve(const ExperimentConfig &cfg);

/// Writes dtb.csv and tangencies.csv.
DtbCurve cmd_predict(const ExperimentConfig &cfg, const RunOptions &opt);

/// Profile of an image against the prediction; writes profile.csv,
/// profile_metrics.txt and global_profile.csv.
ProfileReport cmd_compare(const ExperimentConfig &cfg, const RunOptions &opt,
                          const std::filesystem::path &image_path);

/// simulate, reconstruct, predict and compare in sequence.
ExitCode cmd_run(const ExperimentConfig &cfg, const RunOptions &opt);

/// Runs body and maps the library's exceptions to exit codes, reporting
/// the message on err.
ExitCode guarded(const std::function<ExitCode()> &body, std::ostream &err);

}  // namespace grt::app

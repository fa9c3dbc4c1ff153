#pragma once

#include <filesystem>
#include <vector>

#include "grt/dtb.hpp"
#include "grt/grids.hpp"

namespace grt {

/// Bilinear samples of img at x0 + epsilon * x_check[k] * theta0.
/// Throws ConfigError when a sample falls outside the image rectangle.
std::vector<double> extract_profile(const Image &img, Vec2 x0, Vec2 theta0, double epsilon,
                                    const std::vector<double> &x_check);

struct ProfileReport {
  std::vector<double> x_check;
  std::vector<double> measured;
  std::vector<double> predicted;
  double baseline = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double max_abs_dev = 0.0;
  double rms_dev = 0.0;
  std::size_t window_samples = 0;
};

/// predicted(x) = measured(0) + delta_f * curve(x); deviations over the
/// closed window [window_lo, window_hi]. x_check must contain 0.
ProfileReport compare(const std::vector<double> &x_check, const std::vector<double> &measured,
                      const DtbCurve &curve, double delta_f, double window_lo,
                      double window_hi);

/// Columns x_check,measured,predicted.
void write_profile_csv(const std::filesystem::path &path, const ProfileReport &report);
/// key=value lines.
void write_profile_metrics(const std::filesystem::path &path, const ProfileReport &report);
std::string profile_summary(const ProfileReport &report);

}  // namespace grt

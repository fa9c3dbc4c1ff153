#include "grt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "grt/errors.hpp"

namespace grt {

std::vector<double> extract_profile(const Image &img, Vec2 x0, Vec2 theta0, double epsilon,
                                    const std::vector<double> &x_check) {
  std::vector<double> out;
  out.reserve(x_check.size());
  for (double xc : x_check) {
    const Vec2 p = x0 + (epsilon * xc) * theta0;
    if (!img.grid.contains(p)) {
      std::ostringstream os;
      os << "profile sample at x_check=" << xc << " (" << p.x << ", " << p.y
         << ") lies outside the image";
      throw ConfigError(os.str());
    }
    out.push_back(img.sample(p));
  }
  return out;
}

ProfileReport compare(const std::vector<double> &x_check, const std::vector<double> &measured,
                      const DtbCurve &curve, double delta_f, double window_lo,
                      double window_hi) {
  if (x_check.size() != measured.size())
    throw std::invalid_argument("compare: x_check and measured differ in length");
  if (!std::is_sorted(x_check.begin(), x_check.end()) ||
      std::adjacent_find(x_check.begin(), x_check.end()) != x_check.end())
    throw std::invalid_argument("compare: x_check must be strictly increasing");
  const auto zero = std::find(x_check.begin(), x_check.end(), 0.0);
  if (zero == x_check.end()) throw std::invalid_argument("compare: x_check must contain 0");

  ProfileReport rep;
  rep.x_check = x_check;
  rep.measured = measured;
  rep.baseline = measured[static_cast<std::size_t>(zero - x_check.begin())];
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  rep.predicted.resize(x_check.size());
  double sq = 0.0;
  for (std::size_t k = 0; k < x_check.size(); ++k) {
    // Upsilon(0) = 0, so the prediction meets the baseline exactly at the origin.
    rep.predicted[k] = x_check[k] == 0.0 ? rep.baseline
                                         : rep.baseline + delta_f * curve.at(x_check[k]);
    if (x_check[k] < window_lo || x_check[k] > window_hi) continue;
    const double d = rep.measured[k] - rep.predicted[k];
    rep.max_abs_dev = std::max(rep.max_abs_dev, std::abs(d));
    sq += d * d;
    ++rep.window_samples;
  }
  rep.rms_dev = rep.window_samples ? std::sqrt(sq / static_cast<double>(rep.window_samples)) : 0.0;
  return rep;
}

void write_profile_csv(const std::filesystem::path &path, const ProfileReport &report) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << std::setprecision(17) << "x_check,measured,predicted\n";
  for (std::size_t k = 0; k < report.x_check.size(); ++k)
    os << report.x_check[k] << ',' << report.measured[k] << ',' << report.predicted[k] << '\n';
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

void write_profile_metrics(const std::filesystem::path &path, const ProfileReport &report) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << std::setprecision(17) << "baseline=" << report.baseline << '\n'
     << "window_lo=" << report.window_lo << '\n'
     << "window_hi=" << report.window_hi << '\n'
     << "window_samples=" << report.window_samples << '\n'
     << "max_abs_dev=" << report.max_abs_dev << '\n'
     << "rms_dev=" << report.rms_dev << '\n';
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

std::string profile_summary(const ProfileReport &report) {
  std::ostringstream os;
  os << "profile comparison over x_check in [" << report.window_lo << ", " << report.window_hi
     << "] (" << report.window_samples << " samples)\n"
     << "  baseline f(x0)  : " << report.baseline << '\n'
     << "  max |deviation| : " << report.max_abs_dev << '\n'
     << "  rms deviation   : " << report.rms_dev << '\n';
  return os.str();
}

}  // namespace grt

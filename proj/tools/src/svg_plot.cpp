#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "grt/errors.hpp"

namespace grt::app {

namespace {

constexpr double kWidth = 720.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 55.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Tick step of the form {1, 2, 5} * 10^k giving roughly `target` ticks.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_line_plot(const std::filesystem::path &path, const PlotLabels &labels,
                     const std::vector<Series> &series) {
  Range rx, ry;
  for (const Series &s : series) {
    for (double v : s.x) rx.add(v);
    for (double v : s.y) ry.add(v);
  }
  if (!(rx.lo < rx.hi)) { rx.lo -= 1.0; rx.hi += 1.0; }
  if (!(ry.lo < ry.hi)) { ry.lo -= 1.0; ry.hi += 1.0; }
  const double pad = 0.05 * (ry.hi - ry.lo);
  ry.lo -= pad;
  ry.hi += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
  const auto py = [&](double y) { return kTop + (ry.hi - y) / (ry.hi - ry.lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(labels.title) << "</text>\n";

  const double sx = tick_step(rx.hi - rx.lo, 8);
  for (double t = std::ceil(rx.lo / sx) * sx; t <= rx.hi + 1e-9 * sx; t += sx) {
    const double v = std::abs(t) < 1e-12 * sx ? 0.0 : t;
    svg << "<line x1=\"" << px(v) << "\" y1=\"" << kTop << "\" x2=\"" << px(v) << "\" y2=\""
        << kTop + ph << "\" stroke=\"#e5e5e5\"/>\n"
        << "<text x=\"" << px(v) << "\" y=\"" << kTop + ph + 16
        << "\" text-anchor=\"middle\">" << v << "</text>\n";
  }
  const double sy = tick_step(ry.hi - ry.lo, 6);
  for (double t = std::ceil(ry.lo / sy) * sy; t <= ry.hi + 1e-9 * sy; t += sy) {
    const double v = std::abs(t) < 1e-12 * sy ? 0.0 : t;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(v) << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << py(v) << "\" stroke=\"#e5e5e5\"/>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << v
        << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\">" << escape(labels.x_label) << "</text>\n"
      << "<text transform=\"translate(18," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(labels.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series &s = series[k];
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
        svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    svg << "\"/>\n";
    const double ly = kTop + 16.0 + 16.0 * static_cast<double>(k);
    svg << "<line x1=\"" << kLeft + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + 30
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kLeft + 36 << "\" y=\"" << ly << "\">" << escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << svg.str();
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace grt::app

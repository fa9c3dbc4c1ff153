#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace grt::app {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Line chart with axes, ticks and a legend, written as standalone SVG.
void write_line_plot(const std::filesystem::path &path, const PlotLabels &labels,
                     const std::vector<Series> &series);

}  // namespace grt::app

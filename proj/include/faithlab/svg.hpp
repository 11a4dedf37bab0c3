#pragma once

#include <string>
#include <vector>

namespace faithlab {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool line = true;  // polyline when true, point markers otherwise
  std::string color = "#1f77b4";
};

/// Minimal standalone SVG line/scatter chart with axes and a legend.
std::string render_svg_plot(const std::vector<PlotSeries>& series, const std::string& title,
                            const std::string& x_label, const std::string& y_label);

}  // namespace faithlab

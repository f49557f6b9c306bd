#pragma once

#include <string>
#include <vector>

namespace seqvpr {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Minimal line chart with markers, axes, ticks and a legend.
struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  bool zero_line = false;  // draw y = 0 when it is inside the range

  std::string to_svg(int width = 640, int height = 420) const;
};

}  // namespace seqvpr

#pragma once

#include <string>
#include <vector>

namespace geoeval {

struct ScatterSeries {
  std::string name;
  std::string color;  // CSS color
  std::vector<std::pair<double, double>> points;
};

// Standalone deterministic scatter plot: fixed canvas, axes with ticks,
// legend, one circle per point, optional dashed y=0 reference line. The
// output contains no timestamps, so identical inputs give identical bytes.
std::string scatter_svg(const std::vector<ScatterSeries>& series, const std::string& x_label,
                        const std::string& y_label, bool zero_line);

}  // namespace geoeval

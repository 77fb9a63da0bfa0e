#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "arrl/experiment.hpp"

namespace arrl {

/// Mean and min/max band over seeds of the best-so-far curves, resampled
/// onto a common env-step grid.
struct AggregateCurve {
  std::string method;
  std::string gait;  // "-" for methods without a base controller
  std::vector<long> steps;
  std::vector<double> mean, lo, hi;
};

std::vector<AggregateCurve> aggregate_runs(const std::vector<LoadedRun>& runs,
                                           int grid_points = 200);

void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregateCurve>& curves);

/// Best-so-far training curves, one panel per gait, nogait methods drawn in
/// every panel as references. Pure function of the curves: identical input
/// yields byte-identical SVG.
std::string render_curves_svg(const std::vector<AggregateCurve>& curves);

/// Pixel transform used by the SVG renderer; exposed so the emitted polyline
/// coordinates can be recomputed from the aggregate CSV.
struct PanelTransform {
  double x0, x1, y0, y1;      // data ranges
  double px, py, pw, ph;      // pixel box
  double x_to_px(double x) const { return px + (x - x0) / (x1 - x0) * pw; }
  double y_to_px(double y) const { return py + ph - (y - y0) / (y1 - y0) * ph; }
};

}  // namespace arrl

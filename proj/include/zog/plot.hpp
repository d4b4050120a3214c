#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zog/harness.hpp"

namespace zog {

enum class PlotAxis { kIteration, kWallTime };

struct PlotPoint {
  double x = 0.0;
  double mean = 0.0;
  double sem = 0.0;  // 0 when only one trial contributes
  std::size_t trials = 0;
};

// Mean clamped exploitability across trials at each evaluated iteration, with
// the standard error of the mean. For the wall-time axis x is the mean
// cumulative training time of the contributing trials.
std::vector<PlotPoint> summarize(const std::vector<MetricsRow>& rows, PlotAxis axis);

struct PlotSeries {
  std::string label;
  std::vector<PlotPoint> points;
};

std::string render_svg(const std::vector<PlotSeries>& series, PlotAxis axis);

// Reads each CSV, summarizes it and writes one standalone SVG.
void emit_plot(const std::vector<std::filesystem::path>& csvs, PlotAxis axis,
               const std::filesystem::path& out);

}  // namespace zog

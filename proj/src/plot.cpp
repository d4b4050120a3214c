#include "zog/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "zog/errors.hpp"

namespace zog {

std::vector<PlotPoint> summarize(const std::vector<MetricsRow>& rows, PlotAxis axis) {
  std::map<std::uint64_t, std::vector<const MetricsRow*>> by_iteration;
  for (const auto& r : rows) by_iteration[r.iteration].push_back(&r);

  std::vector<PlotPoint> points;
  for (const auto& [iteration, group] : by_iteration) {
    PlotPoint p;
    p.trials = group.size();
    double sum = 0.0, time = 0.0;
    for (const MetricsRow* r : group) {
      sum += r->exploitability_clamped;
      time += r->wall_time_s;
    }
    const double k = static_cast<double>(group.size());
    p.mean = sum / k;
    p.x = axis == PlotAxis::kIteration ? static_cast<double>(iteration) : time / k;
    if (group.size() > 1) {
      double ss = 0.0;
      for (const MetricsRow* r : group) {
        ss += (r->exploitability_clamped - p.mean) * (r->exploitability_clamped - p.mean);
      }
      p.sem = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    }
    points.push_back(p);
  }
  std::sort(points.begin(), points.end(),
            [](const PlotPoint& a, const PlotPoint& b) { return a.x < b.x; });
  return points;
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, PlotAxis axis) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = 0.0, y_hi = 0.0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.mean - p.sem);
      y_hi = std::max(y_hi, p.mean + p.sem);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0;
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and ticks.
  svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
      << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n"
      << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x_lo + (x_hi - x_lo) * k / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * k / 5.0;
    svg << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(kTop + plot_h + 16)
        << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(yv) + 4)
        << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\">"
      << (axis == PlotAxis::kIteration ? "iteration" : "wall time (s)") << "</text>\n";
  svg << "<text x=\"16\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << num(kTop + plot_h / 2) << ")\">exploitability</text>\n";
  svg << "</g>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const auto& pts = series[s].points;
    const bool has_band =
        std::any_of(pts.begin(), pts.end(), [](const PlotPoint& p) { return p.sem > 0.0; });
    if (has_band && !pts.empty()) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (const auto& p : pts) svg << num(sx(p.x)) << "," << num(sy(p.mean + p.sem)) << " ";
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        svg << num(sx(it->x)) << "," << num(sy(it->mean - it->sem)) << " ";
      }
      svg << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : pts) svg << num(sx(p.x)) << "," << num(sy(p.mean)) << " ";
    svg << "\"/>\n";
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << num(kWidth - kRight + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(kWidth - kRight + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(kWidth - kRight + 38) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(series[s].label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::vector<std::filesystem::path>& csvs, PlotAxis axis,
               const std::filesystem::path& out) {
  if (csvs.empty()) throw ConfigError("plot needs at least one CSV");
  std::vector<PlotSeries> series;
  for (const auto& path : csvs) {
    std::string label = path.parent_path().filename().string();
    if (label.empty() || label == ".") label = path.stem().string();
    series.push_back(PlotSeries{label, summarize(read_csv(path), axis)});
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + out.string() + " for writing");
  file << render_svg(series, axis);
}

}  // namespace zog

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace openns {

/// One plotted series: points in data coordinates plus optional symmetric
/// error bars (same length as points when present).
struct PlotSeries {
  std::string label;
  std::string color = "#000000";
  bool draw_line = true;
  bool draw_markers = true;
  std::vector<std::pair<double, double>> points;
  std::vector<double> errors;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  double vertical_marker = 0.0;  // x position of a dashed boundary line
  bool has_vertical_marker = false;
};

/// Deterministic standalone SVG panel; identical input yields identical
/// bytes.
std::string render_panel(const PlotSpec& spec, int width = 640, int height = 420);

/// Parses a harness results CSV and renders one absolute-bias panel and one
/// MSE panel per domain (x = speed, one line per algorithm, SE bars).
/// Returns (filename, content) pairs; header-only input yields a single pair
/// of empty-axes panels. Schema violations report the offending line number.
std::vector<std::pair<std::string, std::string>> plot_results_csv(const std::string& csv_text);

}  // namespace openns

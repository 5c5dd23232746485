#pragma once

// Minimal self-contained SVG line charts for traces and comparisons.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace memforage {

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<double> y_min;
  std::optional<double> y_max;
  int width = 900;
  int height = 520;
  std::size_t max_points = 1500;  ///< per series; longer series are decimated
};

/// Evenly spaced tick values covering [lo, hi] with a 1/2/5 step.
std::vector<double> nice_ticks(double lo, double hi, int target_count = 6);

/// Keeps at most `max_points` samples, always including the first and last.
ChartSeries decimate(const ChartSeries& series, std::size_t max_points);

/// Throws std::invalid_argument when there are no series or x/y sizes differ.
std::string render_line_chart(const ChartSpec& spec, std::span<const ChartSeries> series);

void write_line_chart(const std::filesystem::path& path, const ChartSpec& spec,
                      std::span<const ChartSeries> series);

}  // namespace memforage

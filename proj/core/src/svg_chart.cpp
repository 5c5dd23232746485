#include "memforage/svg_chart.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "memforage/scenario.hpp"

namespace memforage {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string tick_label(double value, double step) {
  const int decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
  return fmt::format("{:.{}f}", value, decimals);
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target_count) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, target_count - 1);
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  double step = magnitude;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * magnitude;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step - 1e-9) * step;
  for (double t = first; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

ChartSeries decimate(const ChartSeries& series, std::size_t max_points) {
  const std::size_t n = series.x.size();
  if (max_points < 2 || n <= max_points) return series;
  ChartSeries out;
  out.name = series.name;
  const double stride = static_cast<double>(n - 1) / static_cast<double>(max_points - 1);
  for (std::size_t k = 0; k < max_points; ++k) {
    const auto idx = std::min(n - 1, static_cast<std::size_t>(std::llround(k * stride)));
    out.x.push_back(series.x[idx]);
    out.y.push_back(series.y[idx]);
  }
  return out;
}

std::string render_line_chart(const ChartSpec& spec, std::span<const ChartSeries> series) {
  if (series.empty()) throw std::invalid_argument("chart has no series");
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const ChartSeries& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series '" + s.name + "' has x/y size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) throw std::invalid_argument("chart series are empty");
  if (spec.y_min) y_lo = *spec.y_min;
  if (spec.y_max) y_hi = *spec.y_max;
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;

  const double left = 80.0, right = 190.0, top = 50.0, bottom = 60.0;
  const double plot_w = spec.width - left - right;
  const double plot_h = spec.height - top - bottom;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  fmt::memory_buffer svg;
  auto out = std::back_inserter(svg);
  fmt::format_to(out,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                 "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                 spec.width, spec.height);
  fmt::format_to(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::format_to(out, "<text x=\"{:.1f}\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                 left + plot_w / 2, escape(spec.title));

  const auto xticks = nice_ticks(x_lo, x_hi);
  const auto yticks = nice_ticks(y_lo, y_hi);
  const double xstep = xticks.size() > 1 ? xticks[1] - xticks[0] : 1.0;
  const double ystep = yticks.size() > 1 ? yticks[1] - yticks[0] : 1.0;
  for (double t : xticks) {
    fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#e0e0e0\"/>\n",
                   px(t), top, top + plot_h);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", px(t),
                   top + plot_h + 18, tick_label(t, xstep));
  }
  for (double t : yticks) {
    fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#e0e0e0\"/>\n",
                   left, py(t), left + plot_w);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", left - 6,
                   py(t) + 4, tick_label(t, ystep));
  }
  fmt::format_to(out,
                 "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                 left, top, plot_w, plot_h);
  fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                 left + plot_w / 2, spec.height - 15.0, escape(spec.x_label));
  fmt::format_to(out,
                 "<text x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.2f})\">{1}</text>\n",
                 top + plot_h / 2, escape(spec.y_label));

  for (std::size_t k = 0; k < series.size(); ++k) {
    const ChartSeries s = decimate(series[k], spec.max_points);
    const char* colour = kPalette[k % kPalette.size()];
    fmt::format_to(out, "<polyline class=\"series\" data-name=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\" points=\"",
                   escape(s.name), colour);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      fmt::format_to(out, "{}{:.2f},{:.2f}", i ? " " : "", px(s.x[i]), py(std::clamp(s.y[i], y_lo, y_hi)));
    }
    fmt::format_to(out, "\"/>\n");
    const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
    fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" stroke-width=\"3\"/>\n",
                   left + plot_w + 12, ly, left + plot_w + 32, colour);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", left + plot_w + 38, ly + 4,
                   escape(s.name));
  }
  fmt::format_to(out, "</svg>\n");
  return fmt::to_string(svg);
}

void write_line_chart(const std::filesystem::path& path, const ChartSpec& spec,
                      std::span<const ChartSeries> series) {
  const std::string text = render_line_chart(spec, series);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError(path, "cannot open for writing");
  file << text;
  if (!file) throw IoError(path, "write failed");
}

}  // namespace memforage

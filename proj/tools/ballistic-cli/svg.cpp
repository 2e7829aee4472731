// SPDX-License-Identifier: Apache-2.0
#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "text.hpp"

namespace bcli {

namespace {

constexpr double kWidth = 1000.0;
constexpr double kHeight = 640.0;
constexpr double kMargin = 40.0;

std::string gradient_color(double v, double v_max) {
  // blue (fast left) -> gray -> orange (fast right)
  const double u = std::clamp(v_max > 0.0 ? v / v_max : 0.0, -1.0, 1.0);
  const auto lerp = [](int a, int b, double s) { return static_cast<int>(std::lround(a + (b - a) * s)); };
  int r, g, b;
  if (u < 0.0) {
    r = lerp(68, 31, -u), g = lerp(68, 119, -u), b = lerp(68, 180, -u);
  } else {
    r = lerp(68, 255, u), g = lerp(68, 127, u), b = lerp(68, 14, u);
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string class_color(double v) {
  if (v < 0.0) return "#1f77b4";
  if (v > 0.0) return "#ff7f0e";
  return "#444444";
}

}  // namespace

std::string render_svg(const double* positions, const double* speeds, const double* death_times,
                       const double* death_positions, std::size_t n, const SvgOptions& options,
                       std::size_t* drawn_out) {
  double horizon = options.horizon;
  if (horizon <= 0.0) {
    double last = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isfinite(death_times[i])) last = std::max(last, death_times[i]);
    }
    horizon = last > 0.0 ? last * 1.05 : 1.0;
  }

  double x_lo = 0.0, x_hi = 1.0;
  if (n > 0) {
    x_lo = std::numeric_limits<double>::infinity();
    x_hi = -x_lo;
    for (std::size_t i = 0; i < n; ++i) {
      const double end_x = death_times[i] <= horizon && std::isfinite(death_times[i])
                               ? death_positions[i]
                               : positions[i] + speeds[i] * horizon;
      x_lo = std::min({x_lo, positions[i], end_x});
      x_hi = std::max({x_hi, positions[i], end_x});
    }
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  }

  const double draw_w = kWidth - 2.0 * kMargin;
  const double draw_h = kHeight - 2.0 * kMargin;
  const auto sx = [&](double x) { return kMargin + (x - x_lo) / (x_hi - x_lo) * draw_w; };
  const auto sy = [&](double t) { return kHeight - kMargin - t / horizon * draw_h; };

  const std::size_t stride = n > options.max_particles ? (n + options.max_particles - 1) / options.max_particles : 1;

  std::string out;
  out.reserve(256 + (n / stride) * 96);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes: space along the bottom, time up the left side
  out += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kHeight - kMargin) + "\" x2=\"" +
         fmt(kWidth - kMargin) + "\" y2=\"" + fmt(kHeight - kMargin) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kHeight - kMargin) + "\" x2=\"" +
         fmt(kMargin) + "\" y2=\"" + fmt(kMargin) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "<text x=\"" + fmt(kWidth - kMargin) + "\" y=\"" + fmt(kHeight - kMargin + 16.0) +
         "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">x</text>\n";
  out += "<text x=\"" + fmt(kMargin - 8.0) + "\" y=\"" + fmt(kMargin) +
         "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">t=" + fmt(horizon) +
         "</text>\n";

  std::size_t drawn = 0;
  for (std::size_t i = 0; i < n; i += stride) {
    const bool dies = std::isfinite(death_times[i]) && death_times[i] <= horizon;
    const double t_end = dies ? death_times[i] : horizon;
    const double x_end = dies ? death_positions[i] : positions[i] + speeds[i] * horizon;
    const std::string color =
        options.discrete_three ? class_color(speeds[i]) : gradient_color(speeds[i], options.v_max);
    out += "<line x1=\"" + fmt(sx(positions[i])) + "\" y1=\"" + fmt(sy(0.0)) + "\" x2=\"" +
           fmt(sx(x_end)) + "\" y2=\"" + fmt(sy(t_end)) + "\" stroke=\"" + color +
           "\" stroke-width=\"1\"/>\n";
    ++drawn;
  }
  out += "</svg>\n";
  if (drawn_out != nullptr) *drawn_out = drawn;
  return out;
}

}  // namespace bcli

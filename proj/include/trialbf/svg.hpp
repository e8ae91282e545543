#pragma once

// Self-contained SVG heatmap for a sensitivity grid. The output is a pure
// function of the grid and options: fixed layout, fixed 256-step palette,
// integer color math, no timestamps. Golden-file tests rely on that.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "trialbf/exports.hpp"
#include "trialbf/sensitivity.hpp"

namespace trialbf {

struct SvgOptions {
  std::string title;
  std::optional<double> design_effect;  // ratio scale; drawn as a dotted line
  int width = 640;
  int height = 480;
};

namespace detail {

inline std::string svg_num(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

inline int lerp_channel(int from, int to, int step, int steps) {
  // rounded integer interpolation keeps the palette platform-independent
  const int n = (to - from) * step;
  const int rounded = n >= 0 ? (2 * n + steps) / (2 * steps) : -((-2 * n + steps) / (2 * steps));
  return from + rounded;
}

/// Diverging blue -> white -> red ramp with 256 steps; index 127/128
/// straddle the BF = 1 midpoint.
inline std::string ramp_color(int index) {
  constexpr int blue[3] = {0x21, 0x66, 0xac};
  constexpr int white[3] = {0xf7, 0xf7, 0xf7};
  constexpr int red[3] = {0xb2, 0x18, 0x2b};
  int rgb[3];
  if (index <= 127) {
    for (int c = 0; c < 3; ++c) rgb[c] = lerp_channel(blue[c], white[c], index, 127);
  } else {
    for (int c = 0; c < 3; ++c) rgb[c] = lerp_channel(white[c], red[c], index - 128, 127);
  }
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buffer;
}

/// Map a clipped log BF onto the ramp: the null side spans the clip floor up
/// to BF = 1, the alternative side BF = 1 up to the grid maximum.
inline int ramp_index(double log_bf_clipped, double log_floor, double log_max) {
  if (log_bf_clipped <= 0.0) {
    const double t = log_floor < 0.0 ? std::clamp(log_bf_clipped / log_floor, 0.0, 1.0) : 1.0;
    return static_cast<int>(std::lround(127.0 * (1.0 - t)));
  }
  const double t = log_max > 0.0 ? std::clamp(log_bf_clipped / log_max, 0.0, 1.0) : 1.0;
  return 128 + static_cast<int>(std::lround(127.0 * t));
}

}  // namespace detail

/// Render the grid as an SVG heatmap: tau on x, prior mean on y (labeled in
/// ratio units), one rect per cell, a dotted line at the design effect when
/// given, and a max-BF annotation.
inline std::string svg_heatmap(const SensitivityGrid& grid, const SvgOptions& options = {}) {
  const double margin_left = 72.0;
  const double margin_right = 16.0;
  const double margin_top = 42.0;
  const double margin_bottom = 52.0;
  const double plot_w = options.width - margin_left - margin_right;
  const double plot_h = options.height - margin_top - margin_bottom;
  const std::size_t n_tau = grid.tau_axis.size();
  const std::size_t n_mu = grid.mu_axis.size();
  const double cell_w = plot_w / static_cast<double>(n_tau);
  const double cell_h = plot_h / static_cast<double>(n_mu);

  const double log_floor = std::log(grid.spec.clip_floor);
  const double log_max = grid.max_cell.log_bf;

  using detail::svg_num;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
         "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
         std::to_string(options.width) + " " + std::to_string(options.height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(options.width) + "\" height=\"" +
         std::to_string(options.height) + "\" fill=\"#ffffff\"/>\n";

  // cells: column i_tau, row j_mu; mu grows upward
  for (std::size_t i = 0; i < n_tau; ++i) {
    for (std::size_t j = 0; j < n_mu; ++j) {
      const double x = margin_left + static_cast<double>(i) * cell_w;
      const double y = margin_top + static_cast<double>(n_mu - 1 - j) * cell_h;
      std::string fill = "#d9d9d9";
      if (grid.present(i, j)) {
        const double clipped = std::max(grid.at(i, j), log_floor);
        fill = detail::ramp_color(detail::ramp_index(clipped, log_floor, log_max));
      }
      out += "<rect class=\"cell\" x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) + "\" width=\"" +
             svg_num(cell_w) + "\" height=\"" + svg_num(cell_h) + "\" fill=\"" + fill + "\"/>\n";
    }
  }

  // frame
  out += "<rect x=\"" + svg_num(margin_left) + "\" y=\"" + svg_num(margin_top) + "\" width=\"" +
         svg_num(plot_w) + "\" height=\"" + svg_num(plot_h) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // x ticks: tau at five even positions along the axis
  for (int k = 0; k < 5; ++k) {
    const double f = static_cast<double>(k) / 4.0;
    const double tau = grid.spec.tau_min + f * (grid.spec.tau_max - grid.spec.tau_min);
    const double x = margin_left + f * plot_w;
    const double y = margin_top + plot_h;
    out += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(y) + "\" x2=\"" + svg_num(x) +
           "\" y2=\"" + svg_num(y + 5.0) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y + 18.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           fmt_sig(tau) + "</text>\n";
  }
  out += "<text x=\"" + svg_num(margin_left + 0.5 * plot_w) + "\" y=\"" +
         svg_num(margin_top + plot_h + 38.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">prior sd "
         "(tau)</text>\n";

  // y ticks: prior mean in ratio units
  for (int k = 0; k < 5; ++k) {
    const double f = static_cast<double>(k) / 4.0;
    const double mu = grid.spec.mu_min + f * (grid.spec.mu_max - grid.spec.mu_min);
    const double y = margin_top + (1.0 - f) * plot_h;
    out += "<line x1=\"" + svg_num(margin_left - 5.0) + "\" y1=\"" + svg_num(y) + "\" x2=\"" +
           svg_num(margin_left) + "\" y2=\"" + svg_num(y) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + svg_num(margin_left - 8.0) + "\" y=\"" + svg_num(y + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           fmt_sig(std::exp(mu)) + "</text>\n";
  }
  out += "<text x=\"14\" y=\"" + svg_num(margin_top + 0.5 * plot_h) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 14 " +
         svg_num(margin_top + 0.5 * plot_h) + ")\">prior mean (ratio)</text>\n";

  // dotted marker at the power-analysis effect size
  if (options.design_effect) {
    const double mu_line = std::log(*options.design_effect);
    if (mu_line >= grid.spec.mu_min && mu_line <= grid.spec.mu_max) {
      const double f = (mu_line - grid.spec.mu_min) / (grid.spec.mu_max - grid.spec.mu_min);
      const double y = margin_top + (1.0 - f) * plot_h;
      out += "<line x1=\"" + svg_num(margin_left) + "\" y1=\"" + svg_num(y) + "\" x2=\"" +
             svg_num(margin_left + plot_w) + "\" y2=\"" + svg_num(y) +
             "\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
      out += "<text x=\"" + svg_num(margin_left + plot_w - 4.0) + "\" y=\"" + svg_num(y - 4.0) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">ratio " +
             fmt_sig(*options.design_effect) + "</text>\n";
    }
  }

  // title and max annotation
  if (!options.title.empty()) {
    out += "<text x=\"" + svg_num(margin_left) +
           "\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" + options.title +
           "</text>\n";
  }
  out += "<text x=\"" + svg_num(margin_left + plot_w) +
         "\" y=\"34\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">max BF = " +
         fmt_sig(std::exp(grid.max_cell.log_bf)) + " at ratio " +
         fmt_sig(std::exp(grid.max_cell.mu)) + ", tau = " + fmt_sig(grid.max_cell.tau) +
         "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace trialbf

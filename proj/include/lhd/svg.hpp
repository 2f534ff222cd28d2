#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "lhd/design.hpp"

namespace lhd {

/// Two-dimensional projection of a design. Dimensions are 0-based here.
struct PlotSpec {
  std::size_t x_dim = 0;
  std::size_t y_dim = 1;
  /// Label each marker with its 1-based insertion step.
  bool annotate_order = false;
  double size_px = 480.0;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// Renders the (x_dim, y_dim) projection of a design as a standalone SVG
/// document: unit-square frame, a tick at every grid level on both axes, one
/// marker per point. Output depends only on the inputs.
inline std::string render_projection(const Design& design, const PlotSpec& spec) {
  if (spec.x_dim >= design.dim() || spec.y_dim >= design.dim()) {
    throw std::invalid_argument("projection dimension out of range (d = " + std::to_string(design.dim()) + ")");
  }
  if (spec.x_dim == spec.y_dim) throw std::invalid_argument("projection needs two distinct dimensions");
  if (!(spec.size_px > 0.0)) throw std::invalid_argument("plot size must be positive");

  using detail::svg_num;
  const double margin = 40.0;
  const double side = spec.size_px;
  const double total = side + 2.0 * margin;
  const std::size_t n = design.size();
  auto px = [&](double x) { return margin + x * side; };
  auto py = [&](double y) { return margin + (1.0 - y) * side; };
  const double marker = std::max(1.5, std::min(5.0, side / (4.0 * static_cast<double>(n))));

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + svg_num(total) + "\" height=\"" +
         svg_num(total) + "\" viewBox=\"0 0 " + svg_num(total) + " " + svg_num(total) + "\">\n";
  out += "<rect x=\"" + svg_num(px(0)) + "\" y=\"" + svg_num(py(1)) + "\" width=\"" + svg_num(side) + "\" height=\"" +
         svg_num(side) + "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

  out += "<g class=\"ticks\" stroke=\"gray\" stroke-width=\"0.5\">\n";
  for (std::size_t j = 0; j < n; ++j) {
    const double v = design.grid().value(static_cast<Level>(j));
    out += "<line class=\"xtick\" x1=\"" + svg_num(px(v)) + "\" y1=\"" + svg_num(py(0)) + "\" x2=\"" + svg_num(px(v)) +
           "\" y2=\"" + svg_num(py(0) + 5) + "\"/>\n";
    out += "<line class=\"ytick\" x1=\"" + svg_num(px(0) - 5) + "\" y1=\"" + svg_num(py(v)) + "\" x2=\"" +
           svg_num(px(0)) + "\" y2=\"" + svg_num(py(v)) + "\"/>\n";
  }
  out += "</g>\n";

  out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<text x=\"" + svg_num(px(0)) + "\" y=\"" + svg_num(py(0) + 20) + "\" text-anchor=\"middle\">0</text>\n";
  out += "<text x=\"" + svg_num(px(1)) + "\" y=\"" + svg_num(py(0) + 20) + "\" text-anchor=\"middle\">1</text>\n";
  out += "<text x=\"" + svg_num(px(0) - 10) + "\" y=\"" + svg_num(py(1) + 4) + "\" text-anchor=\"end\">1</text>\n";
  out += "<text x=\"" + svg_num(px(0.5)) + "\" y=\"" + svg_num(py(0) + 32) + "\" text-anchor=\"middle\">x" +
         std::to_string(spec.x_dim + 1) + "</text>\n";
  out += "<text x=\"" + svg_num(margin / 2) + "\" y=\"" + svg_num(py(0.5)) + "\" text-anchor=\"middle\">x" +
         std::to_string(spec.y_dim + 1) + "</text>\n";
  out += "</g>\n";

  const auto& order = design.provenance().insertion_order;
  out += "<g class=\"points\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double x = px(design.coord(i, spec.x_dim));
    const double y = py(design.coord(i, spec.y_dim));
    out += "<circle cx=\"" + svg_num(x) + "\" cy=\"" + svg_num(y) + "\" r=\"" + svg_num(marker) +
           "\" fill=\"steelblue\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    if (spec.annotate_order) {
      const std::size_t label = (order && i < order->size() ? (*order)[i] : i) + 1;
      out += "<text class=\"order\" x=\"" + svg_num(x + marker + 1) + "\" y=\"" + svg_num(y - marker - 1) +
             "\" font-family=\"sans-serif\" font-size=\"10\">" + std::to_string(label) + "</text>\n";
    }
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace lhd

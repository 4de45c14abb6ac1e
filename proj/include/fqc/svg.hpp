// Static SVG 1.1 emission: stem plots for atomic measures and peak lists,
// line plots for sampled traces, and cell-grid intensity maps for 2D data.
// Output is plain deterministic text; no drawing library is involved.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "measure.hpp"
#include "diffraction.hpp"

namespace fqc {

struct PlotOptions {
  int width = 760;
  int height = 420;
  int margin_left = 64;
  int margin_right = 18;
  int margin_top = 36;
  int margin_bottom = 48;
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;        // plot log10 of values, floored relative to the max
  double log_floor = 1e-12;  // relative floor applied before taking log10
  std::string stroke = "#1f4e8c";
};

namespace svgdetail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c; break;
    }
  }
  return out;
}

// Maps data coordinates into the pixel viewport. SVG y grows downward,
// data y grows upward, so map_y flips.
struct Frame {
  double px, py, pw, ph;
  double x_min, x_max, y_min, y_max;

  double map_x(double x) const {
    double range = x_max - x_min;
    if (range == 0.0) range = 1.0;
    return px + (x - x_min) / range * pw;
  }
  double map_y(double y) const {
    double range = y_max - y_min;
    if (range == 0.0) range = 1.0;
    return py + (1.0 - (y - y_min) / range) * ph;
  }
};

// Tick positions at a 1/2/5 progression step covering [lo, hi].
inline std::vector<double> ticks(double lo, double hi, int target = 6) {
  std::vector<double> out;
  double range = hi - lo;
  if (!(range > 0.0) || !std::isfinite(range)) return out;
  double raw = range / std::max(1, target);
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  double t = std::ceil(lo / step) * step;
  while (t <= hi + step * 1e-9) {
    if (std::abs(t) < step * 1e-9) t = 0.0;
    out.push_back(t);
    t += step;
  }
  return out;
}

inline void open_svg(std::ostringstream& svg, const PlotOptions& opt) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << opt.width << "\" height=\"" << opt.height << "\" viewBox=\"0 0 "
      << opt.width << " " << opt.height << "\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" fill=\"#ffffff\"/>\n";
}

inline void emit_axes(std::ostringstream& svg, const Frame& f, const PlotOptions& opt) {
  svg << "  <g stroke=\"#444444\" stroke-width=\"1\" fill=\"none\">\n";
  svg << "    <line x1=\"" << fmt(f.px) << "\" y1=\"" << fmt(f.py + f.ph)
      << "\" x2=\"" << fmt(f.px + f.pw) << "\" y2=\"" << fmt(f.py + f.ph) << "\"/>\n";
  svg << "    <line x1=\"" << fmt(f.px) << "\" y1=\"" << fmt(f.py)
      << "\" x2=\"" << fmt(f.px) << "\" y2=\"" << fmt(f.py + f.ph) << "\"/>\n";
  svg << "  </g>\n";

  svg << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\">\n";
  for (double t : ticks(f.x_min, f.x_max)) {
    double x = f.map_x(t);
    svg << "    <line x1=\"" << fmt(x) << "\" y1=\"" << fmt(f.py + f.ph)
        << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(f.py + f.ph + 4)
        << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    svg << "    <text x=\"" << fmt(x) << "\" y=\"" << fmt(f.py + f.ph + 17)
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : ticks(f.y_min, f.y_max)) {
    double y = f.map_y(t);
    svg << "    <line x1=\"" << fmt(f.px - 4) << "\" y1=\"" << fmt(y)
        << "\" x2=\"" << fmt(f.px) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    svg << "    <text x=\"" << fmt(f.px - 7) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  if (!opt.title.empty())
    svg << "    <text x=\"" << fmt(f.px + f.pw / 2) << "\" y=\""
        << fmt(f.py - 12) << "\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(opt.title) << "</text>\n";
  if (!opt.x_label.empty())
    svg << "    <text x=\"" << fmt(f.px + f.pw / 2) << "\" y=\""
        << fmt(f.py + f.ph + 36) << "\" text-anchor=\"middle\">"
        << xml_escape(opt.x_label) << "</text>\n";
  if (!opt.y_label.empty())
    svg << "    <text x=\"" << fmt(f.px - 48) << "\" y=\"" << fmt(f.py + f.ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << fmt(f.px - 48)
        << " " << fmt(f.py + f.ph / 2) << ")\">" << xml_escape(opt.y_label)
        << "</text>\n";
  svg << "  </g>\n";
}

// Applies the optional log10 mapping and returns the plotted values.
inline std::vector<double> display_values(const std::vector<double>& ys,
                                          const PlotOptions& opt) {
  if (!opt.log_y) return ys;
  double top = 0.0;
  for (double y : ys) top = std::max(top, std::abs(y));
  if (top == 0.0) top = 1.0;
  double floor_val = top * opt.log_floor;
  std::vector<double> out;
  out.reserve(ys.size());
  for (double y : ys) out.push_back(std::log10(std::max(std::abs(y), floor_val)));
  return out;
}

inline Frame make_frame(const std::vector<double>& xs, const std::vector<double>& ys,
                        const PlotOptions& opt, bool baseline_zero) {
  double x_lo = xs.empty() ? 0.0 : *std::min_element(xs.begin(), xs.end());
  double x_hi = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end());
  double y_lo = ys.empty() ? 0.0 : *std::min_element(ys.begin(), ys.end());
  double y_hi = ys.empty() ? 1.0 : *std::max_element(ys.begin(), ys.end());
  if (baseline_zero && !opt.log_y) y_lo = std::min(y_lo, 0.0);
  if (x_lo == x_hi) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_lo == y_hi) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  double pad = (y_hi - y_lo) * 0.05;
  Frame f;
  f.px = opt.margin_left;
  f.py = opt.margin_top;
  f.pw = opt.width - opt.margin_left - opt.margin_right;
  f.ph = opt.height - opt.margin_top - opt.margin_bottom;
  f.x_min = x_lo;
  f.x_max = x_hi;
  f.y_min = y_lo;
  f.y_max = y_hi + pad;
  return f;
}

// Three-stop color ramp for intensity maps, dark blue through magenta to yellow.
inline std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };
  double r, g, b;
  if (t < 0.5) {
    double u = t * 2.0;
    r = lerp(13, 177, u);
    g = lerp(8, 42, u);
    b = lerp(135, 144, u);
  } else {
    double u = (t - 0.5) * 2.0;
    r = lerp(177, 240, u);
    g = lerp(42, 249, u);
    b = lerp(144, 33, u);
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", int(r + 0.5), int(g + 0.5),
                int(b + 0.5));
  return buf;
}

}  // namespace svgdetail

// Vertical stems from baseline to each (x, y) sample. Intended for atomic
// measures and peak lists where the x positions are irregular.
inline std::string svg_stem_plot(const std::vector<double>& xs,
                                 const std::vector<double>& ys,
                                 const PlotOptions& opt = {}) {
  guard(xs.size() == ys.size(), "svg_stem_plot: xs and ys must have equal length");
  using namespace svgdetail;
  std::vector<double> shown = display_values(ys, opt);
  Frame f = make_frame(xs, shown, opt, true);
  std::ostringstream svg;
  open_svg(svg, opt);
  emit_axes(svg, f, opt);
  double base = f.map_y(opt.log_y ? f.y_min : 0.0);
  svg << "  <g stroke=\"" << opt.stroke << "\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = f.map_x(xs[i]);
    double y = f.map_y(shown[i]);
    svg << "    <line x1=\"" << fmt(x) << "\" y1=\"" << fmt(base) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(y) << "\"/>\n";
  }
  svg << "  </g>\n";
  svg << "  <g fill=\"" << opt.stroke << "\">\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg << "    <circle cx=\"" << fmt(f.map_x(xs[i])) << "\" cy=\""
        << fmt(f.map_y(shown[i])) << "\" r=\"2.2\"/>\n";
  }
  svg << "  </g>\n</svg>\n";
  return svg.str();
}

// Polyline through regularly or irregularly sampled (x, y) data.
inline std::string svg_line_plot(const std::vector<double>& xs,
                                 const std::vector<double>& ys,
                                 const PlotOptions& opt = {}) {
  guard(xs.size() == ys.size(), "svg_line_plot: xs and ys must have equal length");
  using namespace svgdetail;
  std::vector<double> shown = display_values(ys, opt);
  Frame f = make_frame(xs, shown, opt, false);
  std::ostringstream svg;
  open_svg(svg, opt);
  emit_axes(svg, f, opt);
  svg << "  <polyline fill=\"none\" stroke=\"" << opt.stroke
      << "\" stroke-width=\"1.2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) svg << " ";
    svg << fmt(f.map_x(xs[i])) << "," << fmt(f.map_y(shown[i]));
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

// Cell grid colored by value, for 2D intensity data stored row-major with
// nx columns and ny rows over the rectangle [x0,x1] x [y0,y1].
inline std::string svg_intensity_map(int nx, int ny, const std::vector<double>& vals,
                                     double x0, double x1, double y0, double y1,
                                     const PlotOptions& opt = {}) {
  guard(nx >= 1 && ny >= 1, "svg_intensity_map: grid must be at least 1x1");
  guard(vals.size() == static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny),
        "svg_intensity_map: value count must equal nx*ny");
  using namespace svgdetail;
  std::vector<double> shown = display_values(vals, opt);
  double v_lo = *std::min_element(shown.begin(), shown.end());
  double v_hi = *std::max_element(shown.begin(), shown.end());
  if (v_lo == v_hi) v_hi = v_lo + 1.0;

  Frame f;
  f.px = opt.margin_left;
  f.py = opt.margin_top;
  f.pw = opt.width - opt.margin_left - opt.margin_right;
  f.ph = opt.height - opt.margin_top - opt.margin_bottom;
  f.x_min = x0;
  f.x_max = x1;
  f.y_min = y0;
  f.y_max = y1;

  std::ostringstream svg;
  open_svg(svg, opt);
  double cw = f.pw / nx;
  double ch = f.ph / ny;
  svg << "  <g stroke=\"none\">\n";
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double v = shown[static_cast<std::size_t>(j) * nx + i];
      double t = (v - v_lo) / (v_hi - v_lo);
      double cx = f.px + cw * i;
      double cy = f.py + f.ph - ch * (j + 1);
      svg << "    <rect x=\"" << fmt(cx) << "\" y=\"" << fmt(cy) << "\" width=\""
          << fmt(cw + 0.5) << "\" height=\"" << fmt(ch + 0.5) << "\" fill=\""
          << ramp(t) << "\"/>\n";
    }
  }
  svg << "  </g>\n";
  emit_axes(svg, f, opt);
  svg << "</svg>\n";
  return svg.str();
}

// Stem plot of atom magnitudes for a measure supported on the line.
inline std::string svg_measure_plot(const DiscreteMeasure& mu, PlotOptions opt = {}) {
  guard(mu.dim == 1, "svg_measure_plot: only 1D measures are plotted as stems");
  std::vector<double> xs, ys;
  xs.reserve(mu.size());
  ys.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    xs.push_back(mu.support[i][0]);
    ys.push_back(std::abs(mu.weights[i]));
  }
  if (opt.y_label.empty()) opt.y_label = "|weight|";
  return svg_stem_plot(xs, ys, opt);
}

// Diffraction view: the sampled transform trace with accepted peaks overlaid.
// 1D traces render as a line plus peak stems; 2D traces as an intensity map.
inline std::string svg_diffraction_plot(const DiffractionEstimate& est,
                                        PlotOptions opt = {}) {
  const FrequencyGrid& g = est.grid;
  if (g.dim == 1) {
    std::vector<double> xs, ys;
    xs.reserve(est.trace.size());
    ys.reserve(est.trace.size());
    for (std::size_t i = 0; i < est.trace.size(); ++i) {
      xs.push_back(g.point(i)[0]);
      ys.push_back(est.trace[i]);
    }
    if (opt.x_label.empty()) opt.x_label = "frequency";
    if (opt.y_label.empty()) opt.y_label = opt.log_y ? "log10 intensity" : "intensity";
    std::string base = svg_line_plot(xs, ys, opt);

    using namespace svgdetail;
    std::vector<double> shown = display_values(ys, opt);
    Frame f = make_frame(xs, shown, opt, false);
    std::ostringstream overlay;
    overlay << "  <g stroke=\"#c23b22\" stroke-width=\"1.5\">\n";
    for (std::size_t i = 0; i < est.peaks.size(); ++i) {
      double x = f.map_x(est.peaks.support[i][0]);
      double h = est.peaks.weights[i].real();
      if (opt.log_y) {
        double top = 0.0;
        for (double y : ys) top = std::max(top, std::abs(y));
        if (top == 0.0) top = 1.0;
        h = std::log10(std::max(std::abs(h), top * opt.log_floor));
      }
      overlay << "    <line x1=\"" << fmt(x) << "\" y1=\"" << fmt(f.map_y(f.y_min))
              << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(f.map_y(h)) << "\"/>\n";
    }
    overlay << "  </g>\n";
    std::size_t pos = base.rfind("</svg>");
    base.insert(pos, overlay.str());
    return base;
  }
  guard(g.dim == 2, "svg_diffraction_plot: only 1D and 2D traces are supported");
  return svg_intensity_map(g.resolution[0], g.resolution[1], est.trace,
                           g.center[0] - g.half_width[0], g.center[0] + g.half_width[0],
                           g.center[1] - g.half_width[1], g.center[1] + g.half_width[1],
                           opt);
}

}  // namespace fqc

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "loghm/analysis.hpp"
#include "loghm/error.hpp"
#include "loghm/fieldmap.hpp"

namespace loghm::render {

struct Viewport {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

/// Deformed polar grid: images of concentric circles and radial segments.
struct RenderSpec {
  std::size_t circles = 12;
  std::vector<double> radii;  // overrides `circles` when non-empty
  std::size_t rays = 24;
  std::size_t samples = 512;
  double r_max = 0.97;
  std::optional<Viewport> viewport;
  double stroke_width = 1.0;
  double circle_stroke = 1.0;
  double ray_stroke = 0.75;
  std::size_t width = 800;

  std::vector<double> circle_radii() const {
    if (!radii.empty()) return radii;
    std::vector<double> out;
    for (std::size_t k = 1; k <= circles; ++k)
      out.push_back(r_max * static_cast<double>(k) / static_cast<double>(circles));
    return out;
  }

  void validate() const {
    if (!(r_max > 0.0 && r_max < 1.0)) throw Error(Errc::parameter_range, "r_max must lie in (0, 1)");
    if (samples < 64) throw Error(Errc::parameter_range, "need at least 64 samples per curve");
    for (double r : radii)
      if (!(r > 0.0 && r <= r_max)) throw Error(Errc::parameter_range, "circle radii must lie in (0, r_max]");
  }
};

/// One sampled image curve, split into runs at excluded or non-finite points.
struct Curve {
  enum class Kind { circle, ray } kind;
  double parameter;  // radius or angle
  std::vector<std::vector<cplx>> runs;
};

namespace detail {

inline bool finite(cplx w) { return std::isfinite(w.real()) && std::isfinite(w.imag()); }

template <class Eval>
void append_sample(Curve& c, Eval& eval, cplx z, const std::vector<cplx>& singular, bool& open) {
  std::optional<cplx> w;
  if (!analysis::near_singular_direction(z, singular, 1e-9) || z == cplx{0.0}) {
    try {
      const cplx v = eval(z);
      if (finite(v)) w = v;
    } catch (const Error&) {
    }
  }
  if (!w) {
    open = false;
    return;
  }
  if (!open) {
    c.runs.emplace_back();
    open = true;
  }
  c.runs.back().push_back(*w);
}

}  // namespace detail

/// Samples every circle and ray image. `eval` is only called with |z| <= r_max.
template <class Eval>
std::vector<Curve> sample_curves(Eval&& eval, const std::vector<cplx>& singular, const RenderSpec& spec) {
  spec.validate();
  std::vector<Curve> curves;
  for (double r : spec.circle_radii()) {
    Curve c{Curve::Kind::circle, r, {}};
    bool open = false;
    for (std::size_t m = 0; m <= spec.samples; ++m) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(spec.samples);
      detail::append_sample(c, eval, std::polar(r, t), singular, open);
    }
    curves.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < spec.rays; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(spec.rays);
    Curve c{Curve::Kind::ray, t, {}};
    bool open = false;
    for (std::size_t m = 0; m < spec.samples; ++m) {
      const double r = spec.r_max * static_cast<double>(m) / static_cast<double>(spec.samples - 1);
      detail::append_sample(c, eval, std::polar(r, t), singular, open);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

inline Viewport bounding_box(const std::vector<Curve>& curves, double pad_fraction) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& c : curves)
    for (const auto& run : c.runs)
      for (const auto& w : run) {
        xmin = std::min(xmin, w.real());
        xmax = std::max(xmax, w.real());
        ymin = std::min(ymin, w.imag());
        ymax = std::max(ymax, w.imag());
      }
  if (!(xmin <= xmax)) return {};
  const double px = std::max(xmax - xmin, 1e-12) * pad_fraction;
  const double py = std::max(ymax - ymin, 1e-12) * pad_fraction;
  return {xmin - px, xmax + px, ymin - py, ymax + py};
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

/// SVG 1.1 document with one polyline per curve run.
template <class Eval>
std::string render_svg(Eval&& eval, const std::vector<cplx>& singular, const std::string& label,
                       const RenderSpec& spec) {
  const auto curves = sample_curves(eval, singular, spec);
  const Viewport vp = spec.viewport.value_or(bounding_box(curves, 0.05));
  const double w = static_cast<double>(spec.width);
  const double aspect = (vp.ymax - vp.ymin) / (vp.xmax - vp.xmin);
  const double h = std::max(1.0, std::round(w * aspect));
  auto px = [&](cplx p) {
    return detail::fmt((p.real() - vp.xmin) / (vp.xmax - vp.xmin) * w) + "," +
           detail::fmt((vp.ymax - p.imag()) / (vp.ymax - vp.ymin) * h);
  };

  std::vector<std::string> warnings;
  std::string body;
  for (const auto& c : curves) {
    const bool circle = c.kind == Curve::Kind::circle;
    const bool drawable =
        std::any_of(c.runs.begin(), c.runs.end(), [](const auto& run) { return run.size() >= 2; });
    if (!drawable) {
      warnings.push_back(std::string(circle ? "circle r=" : "ray theta=") + detail::fmt(c.parameter) +
                         " omitted: no evaluable points");
      continue;
    }
    for (const auto& run : c.runs) {
      if (run.size() < 2) continue;
      body += "  <polyline class=\"";
      body += circle ? "circle" : "ray";
      body += "\" stroke-width=\"" + detail::fmt(spec.stroke_width * (circle ? spec.circle_stroke : spec.ray_stroke)) +
              "\" points=\"";
      for (std::size_t i = 0; i < run.size(); ++i) {
        if (i) body += ' ';
        body += px(run[i]);
      }
      body += "\"/>\n";
    }
  }

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::fmt(w) + "\" height=\"" +
         detail::fmt(h) + "\" viewBox=\"0 0 " + detail::fmt(w) + " " + detail::fmt(h) + "\">\n";
  out += "  <title>" + detail::escape(label) + "</title>\n";
  out += "  <metadata>map=" + detail::escape(label) + "; r_max=" + detail::fmt(spec.r_max) +
         "; viewport=[" + detail::fmt(vp.xmin) + "," + detail::fmt(vp.xmax) + "]x[" + detail::fmt(vp.ymin) + "," +
         detail::fmt(vp.ymax) + "]";
  for (const auto& wmsg : warnings) out += "; warning: " + detail::escape(wmsg);
  out += "</metadata>\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "  <g fill=\"none\" stroke=\"#1f3b73\" stroke-linejoin=\"round\">\n";
  out += body;
  out += "  </g>\n</svg>\n";
  return out;
}

inline std::string render_svg(const PlaneMap& map, const RenderSpec& spec) {
  return render_svg([&](cplx z) { return value(map, z); }, singularities(map), label(map), spec);
}

struct Pixmap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first

  bool is_set(std::size_t x, std::size_t y) const { return rgb[3 * (y * width + x)] != 255; }

  std::size_t set_count() const {
    std::size_t n = 0;
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < width; ++x) n += is_set(x, y) ? 1 : 0;
    return n;
  }

  std::string to_ppm() const {
    std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.append(rgb.begin(), rgb.end());
    return out;
  }
};

inline constexpr std::array<std::uint8_t, 3> mask_colour{31, 59, 115};

/**
 * Binary mask of f({|z| <= r_max}): a polar grid over the source disk,
 * dense relative to the pixel size, is pushed forward and every hit pixel
 * is set. The auto viewport is the tight bounding box of the image. A spec
 * with no circles and no rays draws nothing.
 */
template <class Eval>
Pixmap render_raster(Eval&& eval, const std::vector<cplx>& singular, const RenderSpec& spec,
                     std::size_t resolution) {
  spec.validate();
  if (resolution < 1) throw Error(Errc::parameter_range, "resolution must be positive");
  std::vector<cplx> pts;
  const bool empty = spec.circle_radii().empty() && spec.rays == 0;
  if (!empty) {
    const std::size_t nr = 2 * resolution;
    const std::size_t nt = 8 * resolution;
    pts.reserve(nr * nt);
    for (std::size_t i = 0; i <= nr; ++i) {
      const double r = spec.r_max * static_cast<double>(i) / static_cast<double>(nr);
      for (std::size_t j = 0; j < (i == 0 ? 1 : nt); ++j) {
        const cplx z = std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nt));
        if (i > 0 && analysis::near_singular_direction(z, singular, 1e-9)) continue;
        try {
          const cplx w = eval(z);
          if (detail::finite(w)) pts.push_back(w);
        } catch (const Error&) {
        }
      }
    }
  }
  Viewport vp;
  if (spec.viewport) {
    vp = *spec.viewport;
  } else if (!pts.empty()) {
    Curve c{Curve::Kind::circle, 0.0, {pts}};
    vp = bounding_box({c}, 0.0);
  }
  const double aspect = (vp.ymax - vp.ymin) / (vp.xmax - vp.xmin);
  Pixmap pm;
  pm.width = resolution;
  pm.height = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(resolution) * aspect)));
  pm.rgb.assign(3 * pm.width * pm.height, 255);
  for (const auto& w : pts) {
    const double fx = (w.real() - vp.xmin) / (vp.xmax - vp.xmin);
    const double fy = (vp.ymax - w.imag()) / (vp.ymax - vp.ymin);
    if (fx < 0.0 || fx > 1.0 || fy < 0.0 || fy > 1.0) continue;
    const auto x = std::min(pm.width - 1, static_cast<std::size_t>(fx * static_cast<double>(pm.width)));
    const auto y = std::min(pm.height - 1, static_cast<std::size_t>(fy * static_cast<double>(pm.height)));
    std::copy(mask_colour.begin(), mask_colour.end(), pm.rgb.begin() + 3 * (y * pm.width + x));
  }
  return pm;
}

inline Pixmap render_raster(const PlaneMap& map, const RenderSpec& spec, std::size_t resolution) {
  return render_raster([&](cplx z) { return value(map, z); }, singularities(map), spec, resolution);
}

/// Conventional output name `<label>_<r_max>.svg`.
inline std::string default_filename(const std::string& label, double r_max, const std::string& ext) {
  std::string safe;
  for (char c : label) safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') ? c : '_';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", r_max);
  return safe + "_" + buf + "." + ext;
}

}  // namespace loghm::render

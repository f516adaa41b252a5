#pragma once

#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "mapzoo.hpp"

namespace lypqc {

/// Rendering failure (empty or unplottable layer).
struct RenderError : Error {
  using Error::Error;
};

struct Viewport {
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  bool nonempty() const { return xmax > xmin && ymax > ymin; }
};

struct FigureLayer {
  std::string name;
  std::vector<Complex> ring;  // closed polyline
  std::string color;
  std::string label;
};

struct FigureSpec {
  std::vector<FigureLayer> layers;
  Viewport viewport;
  std::size_t samples_per_curve = 400;
};

namespace detail {
inline std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s(buf);
  return s == "-0.0000" ? "0.0000" : s;
}
}  // namespace detail

/// Standalone SVG: one closed path per layer, y axis pointing up, legend in the top-left corner.
inline std::string render_svg(const FigureSpec& spec) {
  if (!spec.viewport.nonempty()) throw RenderError("empty viewport");
  std::set<std::string> names;
  for (auto& l : spec.layers)
    if (!names.insert(l.name).second) throw RenderError("duplicate layer name '" + l.name + "'");
  const double width = 600.0;
  const auto& v = spec.viewport;
  const double scale = width / (v.xmax - v.xmin);
  const double height = scale * (v.ymax - v.ymin);
  auto X = [&](double x) { return detail::fixed4((x - v.xmin) * scale); };
  auto Y = [&](double y) { return detail::fixed4((v.ymax - y) * scale); };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fixed4(width) + "\" height=\"" +
                    detail::fixed4(height) + "\" viewBox=\"0 0 " + detail::fixed4(width) + " " + detail::fixed4(height) +
                    "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (auto& l : spec.layers) {
    std::size_t visible = 0;
    for (Complex p : l.ring)
      if (is_finite(p) && p.real() >= v.xmin && p.real() <= v.xmax && p.imag() >= v.ymin && p.imag() <= v.ymax)
        ++visible;
    if (l.ring.size() < 2 || visible == 0) throw RenderError("layer '" + l.name + "' is empty after sampling");
    out += "<path id=\"" + l.name + "\" fill=\"none\" stroke=\"" + l.color + "\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < l.ring.size(); ++i)
      out += (i ? " L " : "M ") + X(l.ring[i].real()) + " " + Y(l.ring[i].imag());
    out += " Z\"/>\n";
  }
  double ly = 20;
  for (auto& l : spec.layers) {
    out += "<line x1=\"10.0000\" y1=\"" + detail::fixed4(ly) + "\" x2=\"30.0000\" y2=\"" + detail::fixed4(ly) +
           "\" stroke=\"" + l.color + "\" stroke-width=\"2\"/>";
    out += "<text x=\"36.0000\" y=\"" + detail::fixed4(ly + 4) + "\" font-size=\"12\">" + l.label + "</text>\n";
    ly += 18;
  }
  out += "</svg>\n";
  return out;
}

namespace detail {
inline int orient(Complex a, Complex b, Complex c) {
  double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}
}  // namespace detail

/// Proper crossings between an outer and an inner closed polyline. A crossing is ignored when
/// all four segment endpoints lie within `rel_tau` times the longer of the two segments of the
/// other polyline (two samplings of one shared curve interleave by chord sag, second order in
/// the segment length), or when `inner_in_outer` confirms both inner endpoints lie in the
/// closed outer region (the inner curve touches the outer one from inside).
inline std::size_t count_crossings(const std::vector<Complex>& a, const std::vector<Complex>& b,
                                   double rel_tau = 0.05,
                                   const std::function<bool(Complex)>& inner_in_outer = {}) {
  std::size_t count = 0;
  const std::size_t n = a.size(), m = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    Complex p1 = a[i], p2 = a[(i + 1) % n];
    for (std::size_t j = 0; j < m; ++j) {
      Complex q1 = b[j], q2 = b[(j + 1) % m];
      if (std::max(p1.real(), p2.real()) < std::min(q1.real(), q2.real()) ||
          std::max(q1.real(), q2.real()) < std::min(p1.real(), p2.real()) ||
          std::max(p1.imag(), p2.imag()) < std::min(q1.imag(), q2.imag()) ||
          std::max(q1.imag(), q2.imag()) < std::min(p1.imag(), p2.imag()))
        continue;
      int o1 = detail::orient(p1, p2, q1), o2 = detail::orient(p1, p2, q2);
      int o3 = detail::orient(q1, q2, p1), o4 = detail::orient(q1, q2, p2);
      if (o1 * o2 < 0 && o3 * o4 < 0) {
        double tau = rel_tau * std::max(std::abs(p2 - p1), std::abs(q2 - q1));
        bool shared = distance_to_polyline(p1, b) <= tau && distance_to_polyline(p2, b) <= tau &&
                      distance_to_polyline(q1, a) <= tau && distance_to_polyline(q2, a) <= tau;
        bool touching = inner_in_outer && inner_in_outer(q1) && inner_in_outer(q2);
        if (!shared && !touching) ++count;
      }
    }
  }
  return count;
}

}  // namespace lypqc

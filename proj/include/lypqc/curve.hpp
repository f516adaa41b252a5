#pragma once

#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "io.hpp"

namespace lypqc {

/// Polyline with cumulative chord length. Closed curves store each vertex once; the closing
/// segment from back() to front() is implicit.
class SampledCurve {
 public:
  SampledCurve() = default;

  /// Validates distinct consecutive points and accumulates chord lengths.
  SampledCurve(std::vector<Complex> points, bool closed) : points_(std::move(points)), closed_(closed) {
    if (points_.size() < 2) throw DataError("curve needs at least two points");
    cum_.assign(points_.size(), 0.0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!is_finite(points_[i])) throw DataError("curve sample " + std::to_string(i) + " is not finite");
      if (i == 0) continue;
      double seg = std::abs(points_[i] - points_[i - 1]);
      if (!(seg > 0)) throw DataError("repeated consecutive sample at index " + std::to_string(i));
      cum_[i] = cum_[i - 1] + seg;
    }
    if (closed_) {
      closing_ = std::abs(points_.front() - points_.back());
      if (!(closing_ > 0)) throw DataError("closed curve stores its first point twice");
    }
  }

  std::span<const Complex> points() const { return points_; }
  std::span<const double> cum_length() const { return cum_; }
  std::size_t size() const { return points_.size(); }
  bool closed() const { return closed_; }
  Complex operator[](std::size_t i) const { return points_[i]; }

  /// Total length, including the closing segment of a closed curve.
  double length() const { return cum_.back() + closing_; }

  SampledCurve scaled(double factor) const {
    std::vector<Complex> pts(points_);
    for (auto& p : pts) p *= factor;
    return SampledCurve(std::move(pts), closed_);
  }

  /// Closed polyline (closing segment materialized) for plotting and winding tests.
  std::vector<Complex> ring() const {
    std::vector<Complex> r(points_);
    if (closed_) r.push_back(points_.front());
    return r;
  }

 private:
  std::vector<Complex> points_;
  std::vector<double> cum_;
  double closing_ = 0.0;
  bool closed_ = false;
};

namespace detail {
inline void require_shape(double c, double mu) {
  if (!(c > 0) || !std::isfinite(c)) throw ParameterError("c must be positive");
  if (!(mu > 0 && mu < 1)) throw ParameterError("mu must lie in (0,1)");
}
// Per-side interval count for a symmetric polyline with at least n vertices.
inline std::size_t half_count(std::size_t n) { return n / 2; }
}  // namespace detail

/// Graph of y = c|x|^{1+mu} on [-x0, x0], left to right. Always samples x = 0.
inline SampledCurve build_graph_curve(double c, double mu, double x0, std::size_t n) {
  detail::require_shape(c, mu);
  if (!(x0 > 0)) throw ParameterError("x0 must be positive");
  if (n < 16) throw ParameterError("need at least 16 samples");
  std::size_t m = detail::half_count(n);
  std::vector<Complex> pts;
  pts.reserve(2 * m + 1);
  for (std::size_t k = 0; k <= 2 * m; ++k) {
    double x = k == m ? 0.0 : x0 * (static_cast<double>(k) - static_cast<double>(m)) / static_cast<double>(m);
    pts.emplace_back(x, c * std::pow(std::abs(x), 1 + mu));
  }
  return SampledCurve(std::move(pts), false);
}

/// gamma(c, mu, r0): the polar curves pi - phi = c r^mu (left) and phi = c r^mu (right)
/// joined at the origin, traversed left to right, r uniform on each branch including r0.
inline SampledCurve build_gamma_curve(double c, double mu, double r0, std::size_t n) {
  detail::require_shape(c, mu);
  if (!(r0 > 0)) throw ParameterError("r0 must be positive");
  if (!(c * std::pow(r0, mu) < pi / 2)) throw ParameterError("admissibility c*r0^mu < pi/2 violated");
  if (n < 16) throw ParameterError("need at least 16 samples");
  std::size_t m = detail::half_count(n);
  std::vector<Complex> pts;
  pts.reserve(2 * m + 1);
  for (std::size_t k = m; k >= 1; --k) {
    double r = r0 * static_cast<double>(k) / static_cast<double>(m);
    pts.push_back(std::polar(r, pi - c * std::pow(r, mu)));
  }
  pts.emplace_back(0.0, 0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    double r = r0 * static_cast<double>(k) / static_cast<double>(m);
    pts.push_back(std::polar(r, c * std::pow(r, mu)));
  }
  return SampledCurve(std::move(pts), false);
}

/// Circle sampled counter-clockwise from angle `start`.
inline SampledCurve build_circle_curve(Complex center, double radius, std::size_t n, double start = 0.0) {
  if (!(radius > 0)) throw ParameterError("radius must be positive");
  if (n < 3) throw ParameterError("need at least 3 samples");
  std::vector<Complex> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    pts.push_back(center + std::polar(radius, start + 2 * pi * static_cast<double>(k) / static_cast<double>(n)));
  return SampledCurve(std::move(pts), true);
}

/// CSV `re,im,s`.
inline std::string curve_to_csv(const SampledCurve& curve) {
  io::CsvTable t{{"re", "im", "s"}, {}};
  for (std::size_t i = 0; i < curve.size(); ++i)
    t.rows.push_back({curve[i].real(), curve[i].imag(), curve.cum_length()[i]});
  return t.to_string();
}

/// Parses `re,im,s`; the s column is recomputed and checked for consistency.
inline SampledCurve curve_from_csv(std::string_view text, bool closed) {
  auto t = io::parse_csv(text, {"re", "im", "s"});
  std::vector<Complex> pts;
  for (auto& r : t.rows) pts.emplace_back(r[0], r[1]);
  SampledCurve curve(std::move(pts), closed);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double s = t.rows[i][2];
    if (std::abs(s - curve.cum_length()[i]) > 1e-9 * std::max(1.0, curve.length()))
      throw DataError("column s disagrees with chord length at row " + std::to_string(i + 1));
  }
  return curve;
}

}  // namespace lypqc

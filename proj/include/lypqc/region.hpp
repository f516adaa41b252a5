#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "core.hpp"
#include "curve.hpp"
#include "io.hpp"
#include "rng.hpp"

namespace lypqc {

/// Lyp(eps, c, mu) = { w : c|w|^mu < arg w < pi - c|w|^mu, |w| < eps }, arg on (-pi/2, 3pi/2).
struct LypRegionSpec {
  double eps = 0.0;
  double c = 0.0;
  double mu = 0.0;

  /// Opening angle of the lower boundary at radius r.
  double opening(double r) const { return c * std::pow(r, mu); }

  void validate() const {
    if (!(eps > 0) || !std::isfinite(eps)) throw ParameterError("eps must be positive");
    if (!(c > 0) || !std::isfinite(c)) throw ParameterError("c must be positive");
    if (!(mu > 0 && mu < 1)) throw ParameterError("mu must lie in (0,1)");
    if (!(c * std::pow(eps, mu) < pi / 2))
      throw ParameterError("admissibility c*eps^mu < pi/2 violated");
  }

  friend bool operator==(const LypRegionSpec&, const LypRegionSpec&) = default;
};

inline LypRegionSpec make_lyp_region(double eps, double c, double mu) {
  LypRegionSpec s{eps, c, mu};
  s.validate();
  return s;
}

/// Strict membership; w = 0 is never inside.
inline bool region_contains(const LypRegionSpec& spec, Complex w) {
  double r = std::abs(w);
  if (!(r > 0) || !(r < spec.eps)) return false;
  double a = arg_upper_branch(w);
  double lo = spec.opening(r);
  return lo < a && a < pi - lo;
}

/// Signed membership margin: positive inside, negative outside. Mixes the radial slack
/// eps - |w| with the two angular slacks, so it is a certificate of sign, not a distance.
inline double region_margin(const LypRegionSpec& spec, Complex w) {
  double r = std::abs(w);
  if (r == 0) return 0.0;
  double a = arg_upper_branch(w);
  double lo = spec.opening(r);
  return std::min({spec.eps - r, a - lo, pi - lo - a});
}

/// Membership of the closure, with absolute slack `tol`.
inline bool region_closure_contains(const LypRegionSpec& spec, Complex w, double tol = 1e-9) {
  if (std::abs(w) <= tol) return true;
  return region_margin(spec, w) >= -tol;
}

/// Closed boundary polyline: vertex 0, right opening curve, outer arc, left curve.
inline std::vector<Complex> region_boundary(const LypRegionSpec& spec, std::size_t n) {
  std::size_t m = std::max<std::size_t>(n / 3, 4);
  std::vector<Complex> pts;
  pts.reserve(3 * m + 1);
  pts.emplace_back(0.0, 0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    double r = spec.eps * static_cast<double>(k) / static_cast<double>(m);
    pts.push_back(std::polar(r, spec.opening(r)));
  }
  double a0 = spec.opening(spec.eps);
  for (std::size_t k = 1; k < m; ++k)
    pts.push_back(std::polar(spec.eps, a0 + (pi - 2 * a0) * static_cast<double>(k) / static_cast<double>(m)));
  for (std::size_t k = m; k >= 1; --k) {
    double r = spec.eps * static_cast<double>(k) / static_cast<double>(m);
    pts.push_back(std::polar(r, pi - spec.opening(r)));
  }
  return pts;
}

/// Interior samples: radius with area weighting, angle uniform in the open sector at that radius.
inline std::vector<Complex> region_interior_samples(const LypRegionSpec& spec, std::size_t n, CounterRng rng) {
  std::vector<Complex> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    double r = spec.eps * std::sqrt(rng.uniform());
    if (r == 0) continue;
    double lo = spec.opening(r);
    double a = lo + (pi - 2 * lo) * rng.uniform();
    Complex w = std::polar(r, a);
    if (region_contains(spec, w)) pts.push_back(w);
  }
  return pts;
}

/// Lyp^-(eps, c): the convex domain between gamma(c, mu) and the upper arc of the largest
/// circle C(iv, r) tangent to both branches whose enclosed domain stays in Lyp(eps, c, mu).
struct ElementaryDomainSpec {
  LypRegionSpec region;
  double circle_center_v = 0.0;
  double circle_radius = 0.0;
  std::array<Complex, 2> touch_points{};  // Re w1 < Re w2
  double tangency_residual = 0.0;
  int solver_iterations = 0;

  Complex center() const { return {0.0, circle_center_v}; }
};

namespace detail {
struct Tangency {
  Complex touch;
  double v;
  double r;
};
// Circle centered on the imaginary axis, tangent to the right branch at radius rho.
inline Tangency tangency_at(double c, double mu, double rho) {
  double phi = c * std::pow(rho, mu);
  Complex p = std::polar(rho, phi);
  Complex t = std::polar(1.0, phi) * Complex(1.0, c * mu * std::pow(rho, mu));
  double v = p.imag() + p.real() * t.real() / t.imag();
  double r = p.real() * std::abs(t) / t.imag();
  return {p, v, r};
}
}  // namespace detail

inline ElementaryDomainSpec build_elementary_domain(double c, double mu, double eps) {
  LypRegionSpec region = make_lyp_region(eps, c, mu);
  // The top of the circle, v + r, grows with the touch radius; bisect v + r = eps.
  auto excess = [&](double rho) {
    auto t = detail::tangency_at(c, mu, rho);
    return t.v + t.r - eps;
  };
  double lo = 0.0, hi = eps;
  if (!(excess(hi) > 0)) throw NumericError("tangency bracket does not enclose a root", excess(hi));
  int it = 0;
  for (; it < 200 && hi - lo > 1e-16 * eps; ++it) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) > 0 ? hi : lo) = mid;
  }
  auto t = detail::tangency_at(c, mu, lo);
  double residual = std::abs(excess(lo));
  if (residual > 1e-12 * eps) throw NumericError("tangency solve did not converge", residual);

  ElementaryDomainSpec dom;
  dom.region = region;
  dom.circle_center_v = t.v;
  dom.circle_radius = t.r;
  dom.touch_points = {-std::conj(t.touch), t.touch};
  dom.tangency_residual = std::abs(std::abs(dom.center() - t.touch) - t.r);
  dom.solver_iterations = it;
  if (dom.tangency_residual > 1e-9 * t.r)
    throw NumericError("tangency residual above tolerance", dom.tangency_residual);

  // The circle must not cut the opening curve anywhere in the ball of radius eps.
  for (int k = 1; k <= 4000; ++k) {
    double rho = eps * k / 4000.0;
    Complex q = std::polar(rho, c * std::pow(rho, mu));
    if (std::abs(q - dom.center()) < t.r * (1 - 1e-9))
      throw NumericError("tangency circle crosses the opening curve", std::abs(q - dom.center()) - t.r);
  }
  return dom;
}

/// Strict membership: above gamma and, above the touch height, inside the circle.
inline bool elementary_contains(const ElementaryDomainSpec& d, Complex w) {
  double r = std::abs(w);
  if (!(r > 0)) return false;
  double a = arg_upper_branch(w);
  double lo = d.region.opening(r);
  if (!(lo < a && a < pi - lo)) return false;
  if (w.imag() < d.touch_points[1].imag()) return true;
  return std::abs(w - d.center()) < d.circle_radius;
}

inline double elementary_margin(const ElementaryDomainSpec& d, Complex w) {
  double r = std::abs(w);
  if (r == 0) return 0.0;
  double a = arg_upper_branch(w);
  double lo = d.region.opening(r);
  double m = std::min(a - lo, pi - lo - a);
  if (w.imag() >= d.touch_points[1].imag()) m = std::min(m, d.circle_radius - std::abs(w - d.center()));
  return m;
}

/// Closed boundary: gamma from w1 through 0 to w2, then the upper arc back to w1.
/// The upper arc is the one through the top of the circle (larger imaginary midpoint).
inline std::vector<Complex> elementary_boundary(const ElementaryDomainSpec& d, std::size_t n) {
  std::size_t m = std::max<std::size_t>(n / 3, 4);
  double rho = std::abs(d.touch_points[1]);
  const auto& g = d.region;
  std::vector<Complex> pts;
  pts.reserve(3 * m + 1);
  for (std::size_t k = m; k >= 1; --k) {
    double r = rho * static_cast<double>(k) / static_cast<double>(m);
    pts.push_back(std::polar(r, pi - g.opening(r)));
  }
  pts.emplace_back(0.0, 0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    double r = rho * static_cast<double>(k) / static_cast<double>(m);
    pts.push_back(std::polar(r, g.opening(r)));
  }
  double t2 = std::arg(d.touch_points[1] - d.center());
  double t1 = pi - t2;
  std::size_t arc = 2 * m;
  for (std::size_t k = 1; k < arc; ++k)
    pts.push_back(d.center() + std::polar(d.circle_radius, t2 + (t1 - t2) * static_cast<double>(k) / static_cast<double>(arc)));
  return pts;
}

inline std::vector<Complex> elementary_interior_samples(const ElementaryDomainSpec& d, std::size_t n, CounterRng rng) {
  double xmax = std::max(d.touch_points[1].real(), d.circle_radius);
  double ymax = d.circle_center_v + d.circle_radius;
  std::vector<Complex> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    Complex w(rng.uniform(-xmax, xmax), rng.uniform(0.0, ymax));
    if (elementary_contains(d, w)) pts.push_back(w);
  }
  return pts;
}

/// Region specs as flat key-value text.
inline std::string region_to_kv(const LypRegionSpec& s) {
  io::KeyValues kv;
  kv.set("eps", s.eps);
  kv.set("c", s.c);
  kv.set("mu", s.mu);
  return kv.to_string();
}

inline LypRegionSpec region_from_kv(std::string_view text) {
  auto kv = io::KeyValues::parse(text);
  return make_lyp_region(kv.number("eps"), kv.number("c"), kv.number("mu"));
}

inline std::string elementary_to_kv(const ElementaryDomainSpec& d) {
  io::KeyValues kv;
  kv.set("kind", std::string("elementary"));
  kv.set("eps", d.region.eps);
  kv.set("c", d.region.c);
  kv.set("mu", d.region.mu);
  kv.set("circle_center_v", d.circle_center_v);
  kv.set("circle_radius", d.circle_radius);
  kv.set("touch_re", d.touch_points[1].real());
  kv.set("touch_im", d.touch_points[1].imag());
  return kv.to_string();
}

}  // namespace lypqc

#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "constants.hpp"
#include "core.hpp"
#include "curve.hpp"
#include "io.hpp"
#include "isometry.hpp"
#include "mapzoo.hpp"
#include "qhyperbolic.hpp"
#include "region.hpp"
#include "rng.hpp"
#include "shapes.hpp"

namespace lypqc {

inline std::string point_text(Complex z) { return "(" + io::fmt(z.real()) + "," + io::fmt(z.imag()) + ")"; }

// ---------------------------------------------------------------------------------------------
// Hölder and Mori bounds

class HolderCheckParams {
 public:
  HolderCheckParams(double K1, double l0, std::vector<Complex> base_points)
      : K1_(K1), l0_(l0), base_points_(std::move(base_points)) {
    if (!(K1 >= 1)) throw ParameterError("K1 must be at least 1");
    if (!(l0 > 0)) throw ParameterError("l0 must be positive");
    if (base_points_.empty()) throw ParameterError("no base points");
  }

  double K1() const { return K1_; }
  double alpha() const { return 1.0 / K1_; }
  double l0() const { return l0_; }
  const std::vector<Complex>& base_points() const { return base_points_; }

 private:
  double K1_;
  double l0_;
  std::vector<Complex> base_points_;
};

struct HolderReport {
  double tightest_l0 = 0.0;         // max |h(z)| / |z|^{1/K1}
  double tightest_l0_coarse = 0.0;  // same over the first half of the samples
  Complex argmax{};
  double l0 = 0.0;
  std::size_t samples = 0;
  bool finite = false;
  bool stable = false;  // coarse and full agree to 1%
  bool satisfied = false;  // tightest_l0 <= l0 up to a relative 1e-12 round-off allowance
};

/// |h(z)| <= l0 |z|^{1/K1} on the given points with |z| <= 1.
inline HolderReport check_holder_at_zero(const MapHandle& map, const HolderCheckParams& params) {
  Complex h0 = map(0.0);
  if (!(std::abs(h0) < 1e-9))
    throw PreconditionError("map does not fix 0: h(0)=" + point_text(h0), Complex(0, 0));
  HolderReport rep;
  rep.l0 = params.l0();
  const auto& pts = params.base_points();
  const std::size_t half = (pts.size() + 1) / 2;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Complex z = pts[i];
    double r = std::abs(z);
    if (!(r > 0 && r <= 1)) throw ParameterError("base points must satisfy 0 < |z| <= 1");
    double q = std::abs(map(z)) / std::pow(r, params.alpha());
    if (q > rep.tightest_l0) {
      rep.tightest_l0 = q;
      rep.argmax = z;
    }
    if (i < half) rep.tightest_l0_coarse = std::max(rep.tightest_l0_coarse, q);
  }
  rep.samples = pts.size();
  rep.finite = std::isfinite(rep.tightest_l0);
  rep.stable = rep.finite && rep.tightest_l0 - rep.tightest_l0_coarse <= 1e-2 * rep.tightest_l0;
  rep.satisfied = rep.finite && rep.tightest_l0 <= rep.l0 * (1 + 1e-12);
  return rep;
}

struct MoriReport {
  std::size_t pairs = 0;
  double max_ratio = 0.0;  // max |f(z1)-f(z2)| / |z1-z2|^{1/K}
  double bound = 16.0;
  std::size_t violations = 0;
  Complex witness1{}, witness2{};
  bool satisfied() const { return violations == 0; }
};

/// |f(z1) - f(z2)| <= 16 |z1 - z2|^{1/K} over random pairs in the unit disk.
inline MoriReport check_mori(const MapHandle& map, double K, std::size_t pairs, CounterRng rng) {
  if (!(K >= 1)) throw ParameterError("K must be at least 1");
  MoriReport rep;
  for (std::size_t i = 0; i < pairs; ++i) {
    Complex z1 = rng.in_disk(), z2 = rng.in_disk();
    double d = std::abs(z1 - z2);
    if (d == 0) continue;
    double q = std::abs(map(z1) - map(z2)) / std::pow(d, 1.0 / K);
    if (q > rep.max_ratio) {
      rep.max_ratio = q;
      rep.witness1 = z1;
      rep.witness2 = z2;
    }
    if (!(q <= rep.bound)) ++rep.violations;
    ++rep.pairs;
  }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Boundary argument bound

struct BoundaryArgReport {
  double c = 0.0;
  double mu = 0.0;
  double eps = 0.0;
  std::size_t samples_tested = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // c|w|^mu - min(|arg w|, pi - |arg w|)
  Complex witness{};
  std::size_t violations = 0;
  std::optional<ConstantEstimates> constants;
  bool satisfied() const { return violations == 0 && samples_tested > 0; }
};

/// Index of the sample at 0, after checking that the curve passes through 0 with tangent +1
/// (inner normal i).
inline std::size_t require_sp0(const SampledCurve& curve, double tangent_tol = 1e-2) {
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (std::abs(curve[i]) < std::abs(curve[i0])) i0 = i;
  if (!(std::abs(curve[i0]) <= 1e-9 * curve.length()))
    throw PreconditionError("curve does not pass through 0", curve[i0]);
  Complex t = unit_tangents(curve)[i0];
  if (!(std::abs(std::arg(t)) <= tangent_tol))
    throw PreconditionError("tangent at 0 is not +1 (inner normal not pointing up); tangent " + point_text(t),
                            curve[i0]);
  return i0;
}

/// For samples with 0 < |w| < eps: |arg w| < c|w|^mu or |pi - arg w| < c|w|^mu.
inline BoundaryArgReport check_boundary_arg_bound(const SampledCurve& curve, double c, double mu, double eps) {
  if (!(c > 0) || !(mu > 0 && mu < 1) || !(eps > 0)) throw ParameterError("need c > 0, mu in (0,1), eps > 0");
  require_sp0(curve);
  BoundaryArgReport rep;
  rep.c = c;
  rep.mu = mu;
  rep.eps = eps;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    Complex w = curve[i];
    double r = std::abs(w);
    if (!(r > 1e-12 && r < eps)) continue;
    double a = std::abs(std::arg(w));
    double m = c * std::pow(r, mu) - std::min(a, pi - a);
    ++rep.samples_tested;
    if (m < rep.worst_margin) {
      rep.worst_margin = m;
      rep.witness = w;
    }
    if (!(m > 0)) ++rep.violations;
  }
  return rep;
}

/// Same, with c = l2 from the estimated l1 and arc-chord constant (global for closed curves,
/// at the sample through 0 for open ones).
inline BoundaryArgReport check_boundary_arg_bound(const SampledCurve& curve, double mu, double eps) {
  std::size_t i0 = require_sp0(curve);
  ConstantEstimates e;
  e.mu = mu;
  e.samples = curve.size();
  e.l1 = estimate_l1(curve, mu);
  e.b_arc = curve.closed() ? estimate_arc_chord(curve) : estimate_arc_chord_at(curve, i0);
  e.l2 = second_constant(e.l1, e.b_arc, mu);
  auto rep = check_boundary_arg_bound(curve, e.l2, mu, eps);
  rep.constants = e;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Region parameter transport and inclusions

/// H0 = Lyp(eps1, c1, mu1) with eps1 = (eps/l0)^{K1}, mu1 = mu/K1^2; c1 is supplied by the caller.
inline LypRegionSpec transform_region_params(double eps, double c, double mu, double K1, double l0, double c1) {
  if (!(eps > 0 && c > 0 && K1 >= 1 && l0 > 0 && c1 > 0)) throw ParameterError("inputs must be positive, K1 >= 1");
  make_lyp_region(eps, c, mu);
  LypRegionSpec out{std::pow(eps / l0, K1), c1, mu / (K1 * K1)};
  out.validate();
  return out;
}

struct InclusionViolation {
  Complex point;
  std::string which;
  double margin = 0.0;
};

struct InclusionSample {
  std::string which;
  Complex point;
  double margin = 0.0;
};

struct InclusionReport {
  std::size_t samples_tested = 0;
  std::vector<InclusionViolation> violations;
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<InclusionSample> rows;

  bool verdict() const { return violations.empty(); }

  void record(const std::string& which, Complex point, double margin) {
    ++samples_tested;
    rows.push_back({which, point, margin});
    min_margin = std::min(min_margin, margin);
    if (!(margin > 0)) violations.push_back({point, which, margin});
  }

  void merge(const InclusionReport& o) {
    samples_tested += o.samples_tested;
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    min_margin = std::min(min_margin, o.min_margin);
  }

  /// Per-sample rows `which,re,im,margin,inside`.
  std::string to_csv() const {
    std::string out = "which,re,im,margin,inside\n";
    for (auto& r : rows)
      out += r.which + "," + io::fmt(r.point.real()) + "," + io::fmt(r.point.imag()) + "," + io::fmt(r.margin) + "," +
             (r.margin > 0 ? "1" : "0") + "\n";
    return out;
  }
};

/// (a) h(source) inside target, tested at n interior source samples. Points are recorded in
/// the image plane.
inline InclusionReport check_inclusion_forward(const MapHandle& map, const PlanarRegion& source,
                                               const PlanarRegion& target, std::size_t n, std::uint64_t seed,
                                               const std::string& label = "forward") {
  InclusionReport rep;
  for (Complex z : source.interior(n, CounterRng(seed).substream("inclusion/forward"))) {
    Complex w = map(z);
    rep.record(label, w, target.margin(w));
  }
  return rep;
}

/// (b) inner_target inside h(source), by winding number of the mapped source boundary.
inline InclusionReport check_inclusion_reverse(const MapHandle& map, const PlanarRegion& source,
                                               const PlanarRegion& inner_target, std::size_t n, std::uint64_t seed,
                                               std::size_t boundary_n = 20000, const std::string& label = "reverse") {
  auto ring = source.boundary(boundary_n);
  for (auto& p : ring) p = map(p);
  double diam = 0.0;
  for (auto& p : ring) diam = std::max(diam, std::abs(p - ring.front()));
  require_injective_ring(ring, 1e-12 * std::max(diam, 1e-300));
  InclusionReport rep;
  for (Complex w : inner_target.interior(n, CounterRng(seed).substream("inclusion/reverse"))) {
    int wn = winding_number(w, ring);
    if (std::abs(wn) > 1) throw GeometryError("mapped boundary winds " + std::to_string(wn) + " times around " + point_text(w));
    double d = distance_to_polyline(w, ring);
    rep.record(label, w, wn != 0 ? d : -d);
  }
  return rep;
}

struct C1Derivation {
  double c1 = 0.0;
  int doublings = 0;
  LypRegionSpec source;
  InclusionReport report;
};

/// Smallest c1 of the form c_start * 2^k for which h(Lyp(eps1, c1, mu1)) lies in the target.
inline C1Derivation derive_c1(const MapHandle& map, const PlanarRegion& target, double eps1, double mu1,
                              double c_start, std::size_t n, std::uint64_t seed, int max_doublings = 30) {
  double c1 = c_start;
  for (int k = 0; k <= max_doublings; ++k, c1 *= 2) {
    LypRegionSpec s{eps1, c1, mu1};
    s.validate();
    auto rep = check_inclusion_forward(map, lyp_region(s), target, n, seed);
    if (rep.verdict()) return {c1, k, s, rep};
  }
  throw NumericError("no admissible c1 found by doubling", c1);
}

// ---------------------------------------------------------------------------------------------
// Boundary triples on the unit disk

/// Boundary value by radial limit: h(a) when the handle accepts it, otherwise h at the largest
/// radius its domain allows along the ray.
inline Complex boundary_value(const MapHandle& map, Complex a) {
  if (map.boundary_distance(a) >= 0) {
    try {
      return map(a);
    } catch (const DomainError&) {
    }
  }
  double lo = 0.0, hi = std::abs(a);
  Complex u = a / hi;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (map.boundary_distance(mid * u) >= 0 ? lo : hi) = mid;
  }
  return map(lo * u);
}

/// Evaluation that falls back to the radial limit outside the handle's domain.
inline MapHandle radially_clamped(const MapHandle& map) {
  return MapHandle(
      map.name(), map.domain_tag(),
      [map](Complex z) {
        if (map.boundary_distance(z) > 0) return map(z);
        return boundary_value(map, z);
      },
      map.distance_fn(), map.analytic_fn(), map.declared_K());
}

/// Inner normal at h(a): tangent from the least-squares quadratic through five boundary
/// values at angles arg a + k step, k = -2..2, rotated by +90 degrees.
inline Complex estimate_boundary_normal(const MapHandle& map, Complex a, double step = 1e-3) {
  Complex slope{};
  for (int k = -2; k <= 2; ++k) slope += static_cast<double>(k) * boundary_value(map, a * std::polar(1.0, k * step));
  slope /= 10.0 * step;
  if (!(std::abs(slope) > 1e-14)) throw GeometryError("degenerate boundary tangent at a=" + point_text(a));
  return Complex(0, 1) * slope / std::abs(slope);
}

struct RegionTriple {
  PlanarRegion inner;
  PlanarRegion mid;
  PlanarRegion outer;
  Complex anchor{};
  Isometry isometry;
  Complex x0{};
};

struct TripleConfig {
  double mu = 0.5;
  double c = 0.0;  // 0: second constant of the unit circle at this mu
  double eps_outer = 0.1;
  double eps_mid = 0.1;
  double eps_inner = 0.0125;
  double inner_c_factor = 3.0;
  double inner_scale = 1.0;
  std::size_t samples = 2000;
  std::size_t boundary_samples = 6000;
  double normal_step = 1e-3;
};

inline double unit_circle_l2(double mu, std::size_t n = 720) {
  return estimate_constants(build_circle_curve(0.0, 1.0, n), mu).l2;
}

/// outer = T_b(Lyp(eps_outer, c, mu)); mid = h(R_a(A0(Lyp^-(eps_mid, c)))); inner =
/// T_b(scaled Lyp^-(eps_inner, factor c)), with T_b built from b = h(a) and the estimated normal.
inline std::function<RegionTriple(Complex)> make_triple_factory(const MapHandle& map, TripleConfig cfg) {
  if (cfg.c == 0.0) cfg.c = unit_circle_l2(cfg.mu);
  auto outer_model = lyp_region(make_lyp_region(cfg.eps_outer, cfg.c, cfg.mu));
  auto mid_model = through_A0(elementary_region(build_elementary_domain(cfg.c, cfg.mu, cfg.eps_mid)));
  auto inner_model = scaled(
      elementary_region(build_elementary_domain(cfg.c * cfg.inner_c_factor, cfg.mu, cfg.eps_inner)), cfg.inner_scale);
  auto ext = radially_clamped(map);
  return [=](Complex a) {
    a /= std::abs(a);
    Complex b = boundary_value(map, a);
    Complex n = estimate_boundary_normal(map, a, cfg.normal_step);
    Isometry T = make_T_b_from_normal(b, n);
    auto mid_pre = placed(mid_model, make_R_a(std::arg(a)));
    RegionTriple t{placed(inner_model, T), image_region(ext, mid_pre, cfg.boundary_samples), placed(outer_model, T), b,
                   T, ext(a * mobius_A0(Complex(0, cfg.eps_mid / 2)).value())};
    return t;
  };
}

struct TripleReport {
  Complex a{};
  Complex b{};
  Complex normal{};
  Complex x0{};
  InclusionReport inner_in_outer;
  InclusionReport inner_in_mid;
  InclusionReport mid_in_outer;

  bool verdict() const { return inner_in_outer.verdict() && inner_in_mid.verdict() && mid_in_outer.verdict(); }
  double min_margin() const {
    return std::min({inner_in_outer.min_margin, inner_in_mid.min_margin, mid_in_outer.min_margin});
  }
};

/// For every a: inner inside outer (map-free, checked first), then inner inside mid and mid
/// inside outer. The same model-plane samples are used for every a.
inline std::vector<TripleReport> check_triple(const std::vector<Complex>& a_samples,
                                              const std::function<RegionTriple(Complex)>& factory, std::size_t n,
                                              std::uint64_t seed) {
  std::vector<TripleReport> out;
  CounterRng base(seed);
  for (Complex a : a_samples) {
    RegionTriple t = factory(a);
    TripleReport rep;
    rep.a = a;
    rep.b = t.anchor;
    rep.normal = t.isometry.normal();
    rep.x0 = t.x0;
    auto inner_pts = t.inner.interior(n, base.substream("triple/inner"));
    for (Complex w : inner_pts) rep.inner_in_outer.record("inner_in_outer", w, t.outer.margin(w));
    for (Complex w : inner_pts) rep.inner_in_mid.record("inner_in_mid", w, t.mid.margin(w));
    for (Complex w : t.mid.interior(n, base.substream("triple/mid")))
      rep.mid_in_outer.record("mid_in_outer", w, t.outer.margin(w));
    out.push_back(std::move(rep));
  }
  return out;
}

inline std::vector<Complex> unit_circle_points(std::size_t n, double offset = 0.0) {
  std::vector<Complex> pts(n);
  for (std::size_t k = 0; k < n; ++k)
    pts[k] = std::polar(1.0, offset + 2 * pi * static_cast<double>(k) / static_cast<double>(n));
  return pts;
}

// ---------------------------------------------------------------------------------------------
// Harnack-type lower bound

struct HarnackReport {
  double R0 = 0.0;
  std::size_t samples = 0;
  double min_ratio = std::numeric_limits<double>::infinity();  // u(z) / ((1-|z|) R0 / 2)
  Complex argmin{};
  std::size_t violations = 0;
  bool satisfied() const { return violations == 0 && samples > 0; }
};

/// min |w - h(0)| over boundary image samples.
inline double estimate_R0(Complex h0, const std::vector<Complex>& boundary_images) {
  double r = std::numeric_limits<double>::infinity();
  for (Complex w : boundary_images) r = std::min(r, std::abs(w - h0));
  return r;
}

/// u(z) = (h(z) - b) . n >= (1 - |z|) R0 / 2 on `grid`. `boundary_images` are samples of the
/// image boundary used for the half-plane and B(h(0), R0) spot checks.
inline HarnackReport check_harnack_lower(const MapHandle& map, Complex b, Complex normal, double R0,
                                         const std::vector<Complex>& grid,
                                         const std::vector<Complex>& boundary_images) {
  if (!(std::abs(normal) > 0)) throw ParameterError("normal must be nonzero");
  if (!(R0 >= 0)) throw ParameterError("R0 must be nonnegative");
  Complex n = normal / std::abs(normal);
  const double tol = 1e-12;
  auto check_side = [&](Complex z, Complex w) {
    if (dot(w - b, n) < -tol)
      throw PreconditionError("image leaves the half-plane at h" + point_text(z) + "=" + point_text(w), z);
  };
  for (Complex w : boundary_images) check_side(w, w);
  Complex h0 = map(0.0);
  for (Complex w : boundary_images)
    if (std::abs(w - h0) < R0 * (1 - 1e-9))
      throw PreconditionError("B(h(0), R0) is not inside the image; boundary sample " + point_text(w), w);
  HarnackReport rep;
  rep.R0 = R0;
  for (Complex z : grid) {
    Complex w = map(z);
    check_side(z, w);
    double u = dot(w - b, n);
    double rhs = (1 - std::abs(z)) * R0 / 2;
    ++rep.samples;
    double ratio = rhs > 0 ? u / rhs : std::numeric_limits<double>::infinity();
    if (ratio < rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.argmin = z;
    }
    if (!(u >= rhs)) ++rep.violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Distance to the graph y = c x^{1+mu}

struct LemmaDistanceReport {
  double c = 0.0, mu = 0.0, d = 0.0;
  double eps0 = 0.0;           // equation solver
  double eps0_closed = 0.0;    // (c^2 (1+mu))^{-1/(2 mu)}
  double C = 0.0;              // c eps0^{1+mu}
  double d_prime = 0.0;        // dist((0,d), graph)
  double x1 = 0.0;             // minimizer
  double stationarity_residual = 0.0;  // |d - d(x1)| / d from the stationarity relation
  bool applicable = false;     // d <= C
  bool holds = false;          // d <= 2 d'
  bool satisfied() const { return !applicable || holds; }
};

/// Positive root of c^2 (1+mu) x^{2mu} = 1 by bisection.
inline double solve_eps0(double c, double mu) {
  auto g = [&](double x) { return c * c * (1 + mu) * std::pow(x, 2 * mu) - 1; };
  double lo = 0.0, hi = 1.0;
  while (g(hi) < 0) hi *= 2;
  for (int i = 0; i < 400 && hi - lo > 1e-16 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Minimum over x >= 0 of |(x, c x^{1+mu}) - (0, d)|: uniform grid on [0, d], then golden-section
/// refinement around the best node. Returns (distance, minimizer).
inline std::pair<double, double> graph_distance(double c, double mu, double d, std::size_t grid) {
  auto f = [&](double x) { return std::hypot(x, c * std::pow(x, 1 + mu) - d); };
  const double X = d;
  std::size_t best = 0;
  double fbest = f(0.0);
  for (std::size_t k = 1; k <= grid; ++k) {
    double v = f(X * static_cast<double>(k) / static_cast<double>(grid));
    if (v < fbest) {
      fbest = v;
      best = k;
    }
  }
  double a = X * static_cast<double>(best > 0 ? best - 1 : 0) / static_cast<double>(grid);
  double b = X * static_cast<double>(std::min(best + 1, grid)) / static_cast<double>(grid);
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && b - a > 1e-15 * X; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  double x = 0.5 * (a + b);
  if (!std::isfinite(f(x)) || b - a > 1e-9 * X) throw NumericError("distance minimization did not converge", b - a);
  // polish the minimizer on the stationarity relation, which is well conditioned where f is flat
  auto g = [&](double t) { return t + c * (1 + mu) * std::pow(t, mu) * (c * std::pow(t, 1 + mu) - d); };
  if (x > 0) {
    double lo = x, hi = x;
    for (int i = 0; i < 200 && g(lo) >= 0; ++i) lo *= 0.5;
    for (int i = 0; i < 200 && g(hi) <= 0 && hi < X; ++i) hi = std::min(2 * hi, X);
    if (g(lo) < 0 && g(hi) > 0) {
      for (int i = 0; i < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0 ? lo : hi) = mid;
      }
      double xs = 0.5 * (lo + hi);
      if (f(xs) <= f(x) * (1 + 1e-12)) x = xs;
    }
  }
  double v = std::min(f(x), fbest);
  return {v, x};
}

inline LemmaDistanceReport check_lemma_distance(double c, double mu, double d, std::size_t grid = 1000000) {
  if (!(c > 0) || !(mu > 0 && mu < 1) || !(d > 0)) throw ParameterError("need c > 0, mu in (0,1), d > 0");
  LemmaDistanceReport r;
  r.c = c;
  r.mu = mu;
  r.d = d;
  r.eps0 = solve_eps0(c, mu);
  r.eps0_closed = std::pow(c * c * (1 + mu), -1 / (2 * mu));
  r.C = c * std::pow(r.eps0, 1 + mu);
  auto [dp, x1] = graph_distance(c, mu, d, grid);
  r.d_prime = dp;
  r.x1 = x1;
  double d_stat = std::pow(x1, 1 - mu) * (1 + c * c * (1 + mu) * std::pow(x1, 2 * mu)) / (c * (1 + mu));
  r.stationarity_residual = std::abs(d_stat - d) / d;
  r.applicable = d <= r.C;
  r.holds = d <= 2 * dp;
  return r;
}

// ---------------------------------------------------------------------------------------------
// Co-Lipschitz scans

struct CoLipReport {
  std::string grid;
  double min_lambda = std::numeric_limits<double>::infinity();
  Complex argmin{};
  double boundary_margin = std::numeric_limits<double>::infinity();  // min boundary distance on the grid
  std::size_t samples = 0;
  std::vector<DilatationSample> rows;
};

inline CoLipReport colip_scan(const MapHandle& map, const std::vector<Complex>& grid, std::string description) {
  CoLipReport rep;
  rep.grid = std::move(description);
  for (Complex z : grid) {
    auto s = dilatation_at(map, z);
    rep.rows.push_back(s);
    ++rep.samples;
    rep.boundary_margin = std::min(rep.boundary_margin, map.boundary_distance(z));
    if (s.lambda < rep.min_lambda) {
      rep.min_lambda = s.lambda;
      rep.argmin = z;
    }
  }
  return rep;
}

enum class Trend { flat, decreasing, mixed };

inline const char* trend_name(Trend t) {
  switch (t) {
    case Trend::flat:
      return "flat";
    case Trend::decreasing:
      return "decreasing";
    default:
      return "mixed";
  }
}

struct CoLipTrend {
  std::vector<double> levels;  // shell parameter (boundary margin or radius)
  std::vector<CoLipReport> shells;
  std::vector<double> ratios;  // min_lambda[k+1] / min_lambda[k]
  Trend trend = Trend::mixed;
  bool strictly_decreasing = false;
};

/// flat: every min positive and every successive ratio >= 1/2. decreasing: strictly decreasing
/// with every successive ratio < 1/2.
inline CoLipTrend colip_trend(const MapHandle& map, const std::vector<double>& levels,
                              const std::vector<std::vector<Complex>>& shells) {
  if (levels.size() != shells.size() || levels.size() < 2) throw ParameterError("need at least two matching shells");
  CoLipTrend t;
  t.levels = levels;
  for (std::size_t k = 0; k < shells.size(); ++k)
    t.shells.push_back(colip_scan(map, shells[k], "shell " + io::fmt(levels[k])));
  bool positive = true, flat = true, halving = true;
  t.strictly_decreasing = true;
  for (auto& s : t.shells) positive = positive && s.min_lambda > 0;
  for (std::size_t k = 0; k + 1 < t.shells.size(); ++k) {
    double a = t.shells[k].min_lambda, b = t.shells[k + 1].min_lambda;
    double ratio = b / a;
    t.ratios.push_back(ratio);
    flat = flat && ratio >= 0.5;
    halving = halving && ratio < 0.5;
    t.strictly_decreasing = t.strictly_decreasing && b < a;
  }
  if (positive && flat) {
    t.trend = Trend::flat;
  } else if (t.strictly_decreasing && halving) {
    t.trend = Trend::decreasing;
  }
  return t;
}

/// n_t points on |z| = r in the open upper half-plane.
inline std::vector<Complex> upper_semicircle(double r, std::size_t n_t) {
  std::vector<Complex> pts(n_t);
  for (std::size_t j = 0; j < n_t; ++j) pts[j] = std::polar(r, pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n_t));
  return pts;
}

inline std::vector<Complex> circle_points(double r, std::size_t n_t) {
  std::vector<Complex> pts(n_t);
  for (std::size_t j = 0; j < n_t; ++j) pts[j] = std::polar(r, 2 * pi * static_cast<double>(j) / static_cast<double>(n_t));
  return pts;
}

}  // namespace lypqc

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "core.hpp"
#include "io.hpp"
#include "region.hpp"
#include "rng.hpp"

namespace lypqc {

namespace detail {
inline void require_nonzero(Complex z, const char* name) {
  if (!is_finite(z)) throw DomainError(std::string(name) + " must be finite");
  if (z == Complex(0, 0)) throw DomainError(std::string(name) + " must be nonzero");
}
}  // namespace detail

/// Angle at the origin between the rays through z1 and z2, in [0, pi].
inline double convex_angle(Complex z1, Complex z2) {
  detail::require_nonzero(z1, "z1");
  detail::require_nonzero(z2, "z2");
  return std::atan2(std::abs(cross(z1, z2)), dot(z1, z2));
}

/// Quasihyperbolic distance in C \ {0}: sqrt(ln^2(r2/r1) + theta^2).
inline double qh_distance(Complex z1, Complex z2) {
  double theta = convex_angle(z1, z2);
  double r1 = std::abs(z1), r2 = std::abs(z2);
  if (r1 > r2) std::swap(r1, r2);
  return std::hypot(std::log(r2 / r1), theta);
}

// Möbius normalizers. All accept and return the infinity sentinel.

/// X_p(z) = p z / (z - p): X(0) = 0, X(p) = inf, X(inf) = p. X_p is an involution.
inline ExtendedPoint mobius_X(Complex p, ExtendedPoint z) {
  if (p == Complex(0, 0)) throw DomainError("p must be nonzero");
  if (z.is_infinity()) return p;
  Complex w = z.value();
  if (w == p) return ExtendedPoint::infinity();
  return p * w / (w - p);
}

/// Y_p(z) = -p z / (z - p): Y(0) = 0, Y(p) = inf, Y(inf) = -p. Y_p = -X_p, so Y_p is close
/// to the identity near 0 (Y_p(z) = z + z^2/p + ...).
inline ExtendedPoint mobius_Y(Complex p, ExtendedPoint z) {
  if (p == Complex(0, 0)) throw DomainError("p must be nonzero");
  if (z.is_infinity()) return -p;
  Complex w = z.value();
  if (w == p) return ExtendedPoint::infinity();
  return -p * w / (w - p);
}

/// A0(z) = (4i - z) / (4i + z), mapping the upper half-plane onto the unit disk, 0 -> 1.
inline ExtendedPoint mobius_A0(ExtendedPoint z) {
  const Complex four_i(0, 4);
  if (z.is_infinity()) return Complex(-1, 0);
  Complex w = z.value();
  if (w == -four_i) return ExtendedPoint::infinity();
  return (four_i - w) / (four_i + w);
}

/// A0^{-1}(w) = 4i (1 - w) / (1 + w).
inline ExtendedPoint mobius_A0_inv(ExtendedPoint w) {
  const Complex four_i(0, 4);
  if (w.is_infinity()) return -four_i;
  Complex u = w.value();
  if (u == Complex(-1, 0)) return ExtendedPoint::infinity();
  return four_i * (1.0 - u) / (1.0 + u);
}

/// Result of testing theta* <= c max{theta^alpha, theta}.
struct AngleDistortionRecord {
  double theta = 0.0;
  double theta_star = 0.0;
  double bound = 0.0;
  double alpha = 1.0;
  double c_used = 1.0;
  double tightest_c = 0.0;  // theta* / max{theta^alpha, theta}; +inf when theta = 0 < theta*
  bool satisfied = false;
};

inline AngleDistortionRecord check_gehring_osgood(double theta, double theta_star, double c, double alpha) {
  if (!(theta >= 0 && theta <= pi) || !(theta_star >= 0 && theta_star <= pi))
    throw ParameterError("angles must lie in [0, pi]");
  if (!(c > 0)) throw ParameterError("c must be positive");
  if (!(alpha > 0 && alpha <= 1)) throw ParameterError("alpha must lie in (0, 1]");
  AngleDistortionRecord rec{theta, theta_star, 0.0, alpha, c, 0.0, false};
  double scale = std::max(std::pow(theta, alpha), theta);
  rec.bound = c * scale;
  if (scale > 0) {
    rec.tightest_c = theta_star / scale;
  } else {
    rec.tightest_c = theta_star > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  rec.satisfied = theta_star <= rec.bound;
  return rec;
}

/// Sweep of equal-radius pairs (e^{i t0}, e^{i (t0 + theta)}) through a planar map; returns
/// the record for each theta. `map` must be defined on the unit circle.
template <class Map>
std::vector<AngleDistortionRecord> angle_distortion_sweep(const Map& map, double c, double alpha,
                                                           const std::vector<double>& thetas,
                                                           const std::vector<double>& base_angles) {
  std::vector<AngleDistortionRecord> out;
  for (double theta : thetas) {
    AngleDistortionRecord worst{};
    bool first = true;
    for (double t0 : base_angles) {
      Complex z1 = std::polar(1.0, t0), z2 = std::polar(1.0, t0 + theta);
      double ts = convex_angle(map(z1), map(z2));
      auto rec = check_gehring_osgood(std::min(theta, pi), ts, c, alpha);
      if (first || rec.tightest_c > worst.tightest_c) worst = rec;
      first = false;
    }
    out.push_back(worst);
  }
  return out;
}

inline std::string angle_sweep_to_csv(const std::vector<AngleDistortionRecord>& recs) {
  io::CsvTable t{{"theta", "theta_star", "bound", "tightest_c"}, {}};
  for (auto& r : recs) t.rows.push_back({r.theta, r.theta_star, r.bound, r.tightest_c});
  return t.to_string();
}

/// theta(X z1, X z2) <= (1 + 1/r0) theta(z1, z2), r0 = |p|/2, for |z1| = |z2| < r0.
struct XAngleRecord {
  double theta = 0.0;
  double theta_image = 0.0;
  double factor = 0.0;  // 1 + 1/r0
  double bound = 0.0;
  double margin = 0.0;  // bound - theta_image
  bool satisfied = false;
};

inline XAngleRecord check_X_angle_bound(Complex p, Complex z1, Complex z2) {
  detail::require_nonzero(p, "p");
  detail::require_nonzero(z1, "z1");
  detail::require_nonzero(z2, "z2");
  double r1 = std::abs(z1), r2 = std::abs(z2);
  double r0 = std::abs(p) / 2;
  if (std::abs(r1 - r2) > 1e-9 * std::max(r1, r2)) throw DomainError("points must have equal modulus");
  if (!(std::max(r1, r2) < r0)) throw DomainError("points must lie in B(0, |p|/2)");
  XAngleRecord rec;
  rec.theta = convex_angle(z1, z2);
  rec.theta_image = convex_angle(mobius_X(p, z1).value(), mobius_X(p, z2).value());
  rec.factor = 1 + 1 / r0;
  rec.bound = rec.factor * rec.theta;
  rec.margin = rec.bound - rec.theta_image;
  rec.satisfied = rec.theta_image <= rec.bound;
  return rec;
}

/// Outcome of the sampled pull-back search.
struct PullBackResult {
  LypRegionSpec region;
  int iterations = 0;
  std::size_t samples_checked = 0;
  double min_margin = 0.0;  // worst target margin over the mapped samples
};

/// Finds H0 = Lyp(eps1, c1, mu) with Y_p(H0) inside `target`. Starting from a first-order
/// guess, alternately halves eps1 and doubles c1 until every boundary and interior sample maps
/// strictly inside. Samples at the shared vertex 0 are excluded.
inline PullBackResult pull_back_region_through_Y(Complex p, const LypRegionSpec& target,
                                                 std::size_t samples = 10000, std::uint64_t seed = 0) {
  detail::require_nonzero(p, "p");
  target.validate();
  if (!(target.eps < std::abs(p) / 2)) throw ParameterError("target eps must be below |p|/2");
  // Start from the first-order distortion of Y_p on B(0, eps): |Y z| <= |z| / (1 - |z|/|p|)
  // and |arg Y z - arg z| <= asin(|z|/|p|).
  const double pm = std::abs(p);
  LypRegionSpec cand = target;
  cand.eps = target.eps / (1 + target.eps / pm) * (1 - 1e-6);
  cand.c = target.c * std::pow(1 / (1 - cand.eps / pm), target.mu) +
           2 * std::pow(cand.eps, 1 - target.mu) / (pm - cand.eps);
  while (!(cand.c * std::pow(cand.eps, cand.mu) < pi / 2)) cand.eps /= 2;
  Complex witness{};
  double worst = 0.0;
  for (int it = 0; it < 60; ++it) {
    if (it > 0) {
      if (it % 2 == 1) {
        cand.eps /= 2;
      } else {
        cand.c *= 2;
        // keep admissible by shrinking eps when doubling c would break it
        while (!(cand.c * std::pow(cand.eps, cand.mu) < pi / 2)) cand.eps /= 2;
      }
    }
    auto pts = region_boundary(cand, samples / 2);
    pts.erase(pts.begin());  // vertex
    auto inner = region_interior_samples(cand, samples - pts.size(), CounterRng(seed).substream("pullback"));
    pts.insert(pts.end(), inner.begin(), inner.end());
    bool ok = true;
    worst = std::numeric_limits<double>::infinity();
    for (Complex z : pts) {
      Complex w = mobius_Y(p, z).value();
      double m = region_margin(target, w);
      if (m < worst) {
        worst = m;
        witness = z;
      }
      if (!(m > 0)) ok = false;
    }
    if (ok) return {cand, it, pts.size(), worst};
  }
  throw NumericError("pull-back search failed; violating sample at (" + io::fmt(witness.real()) + "," +
                         io::fmt(witness.imag()) + ")",
                     worst);
}

}  // namespace lypqc

#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "core.hpp"
#include "isometry.hpp"
#include "mapzoo.hpp"
#include "qhyperbolic.hpp"
#include "region.hpp"
#include "rng.hpp"

namespace lypqc {

/// Winding number of a closed polyline around q (0 when q is outside).
inline int winding_number(Complex q, const std::vector<Complex>& ring) {
  int wn = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    Complex a = ring[i], b = ring[(i + 1) % n];
    double side = cross(b - a, q - a);
    if (a.imag() <= q.imag()) {
      if (b.imag() > q.imag() && side > 0) ++wn;
    } else if (b.imag() <= q.imag() && side < 0) {
      --wn;
    }
  }
  return wn;
}

/// Distance to the polyline, positive when enclosed.
inline double polygon_signed_distance(Complex q, const std::vector<Complex>& ring) {
  double d = distance_to_polyline(q, ring);
  return winding_number(q, ring) != 0 ? d : -d;
}

/// A bounded planar region given by a membership margin (positive inside; a sign certificate,
/// not necessarily a distance), a closed boundary sampler and an interior sampler.
struct PlanarRegion {
  using MarginFn = std::function<double(Complex)>;
  using BoundaryFn = std::function<std::vector<Complex>(std::size_t)>;
  using InteriorFn = std::function<std::vector<Complex>(std::size_t, CounterRng)>;

  std::string kind;
  MarginFn margin;
  BoundaryFn boundary;
  InteriorFn interior;

  bool contains(Complex w) const { return margin(w) > 0; }
};

inline PlanarRegion lyp_region(const LypRegionSpec& spec) {
  spec.validate();
  return {"lyp", [spec](Complex w) { return region_margin(spec, w); },
          [spec](std::size_t n) { return region_boundary(spec, n); },
          [spec](std::size_t n, CounterRng rng) { return region_interior_samples(spec, n, rng); }};
}

inline PlanarRegion elementary_region(const ElementaryDomainSpec& d) {
  return {"elementary", [d](Complex w) { return elementary_margin(d, w); },
          [d](std::size_t n) { return elementary_boundary(d, n); },
          [d](std::size_t n, CounterRng rng) { return elementary_interior_samples(d, n, rng); }};
}

inline PlanarRegion disk_region(Complex center, double radius) {
  if (!(radius > 0)) throw ParameterError("disk radius must be positive");
  return {"disk", [=](Complex w) { return radius - std::abs(w - center); },
          [=](std::size_t n) {
            std::vector<Complex> pts(n);
            for (std::size_t k = 0; k < n; ++k)
              pts[k] = center + std::polar(radius, 2 * pi * static_cast<double>(k) / static_cast<double>(n));
            return pts;
          },
          [=](std::size_t n, CounterRng rng) {
            std::vector<Complex> pts(n);
            for (auto& p : pts) p = center + rng.in_disk(radius);
            return pts;
          }};
}

/// Upper half of the disk B(0, radius): a bounded stand-in for the upper half-plane.
inline PlanarRegion upper_half_disk_region(double radius) {
  if (!(radius > 0)) throw ParameterError("radius must be positive");
  return {"upper_half_disk", [=](Complex w) { return std::min(radius - std::abs(w), w.imag()); },
          [=](std::size_t n) {
            std::size_t m = std::max<std::size_t>(n / 2, 4);
            std::vector<Complex> pts;
            for (std::size_t k = 0; k < m; ++k)
              pts.emplace_back(-radius + 2 * radius * static_cast<double>(k) / static_cast<double>(m), 0.0);
            for (std::size_t k = 0; k < m; ++k)
              pts.push_back(std::polar(radius, pi * static_cast<double>(k) / static_cast<double>(m)));
            return pts;
          },
          [=](std::size_t n, CounterRng rng) {
            std::vector<Complex> pts;
            while (pts.size() < n) {
              Complex w = rng.in_disk(radius);
              if (w.imag() > 0) pts.push_back(w);
            }
            return pts;
          }};
}

/// Image of `r` under a bijection with a known inverse.
inline PlanarRegion transformed(const PlanarRegion& r, std::function<Complex(Complex)> forward,
                                std::function<Complex(Complex)> inverse, std::string kind) {
  auto map_all = [forward](std::vector<Complex> pts) {
    for (auto& p : pts) p = forward(p);
    return pts;
  };
  return {std::move(kind), [r, inverse](Complex w) { return r.margin(inverse(w)); },
          [r, map_all](std::size_t n) { return map_all(r.boundary(n)); },
          [r, map_all](std::size_t n, CounterRng rng) { return map_all(r.interior(n, rng)); }};
}

inline PlanarRegion placed(const PlanarRegion& r, const Isometry& iso) {
  Isometry inv = iso.inverse();
  return transformed(
      r, [iso](Complex z) { return iso(z); }, [inv](Complex w) { return inv(w); }, r.kind);
}

/// Homothety about the origin.
inline PlanarRegion scaled(const PlanarRegion& r, double factor) {
  if (!(factor > 0)) throw ParameterError("scale factor must be positive");
  return transformed(
      r, [factor](Complex z) { return z * factor; }, [factor](Complex w) { return w / factor; }, r.kind);
}

/// A0 image of a region of the closed upper half-plane.
inline PlanarRegion through_A0(const PlanarRegion& r) {
  return transformed(
      r, [](Complex z) { return mobius_A0(z).value(); },
      [](Complex w) {
        auto z = mobius_A0_inv(w);
        return z.is_infinity() ? Complex(0, -1e300) : z.value();
      },
      "A0(" + r.kind + ")");
}

/// Throws GeometryError if two non-adjacent boundary images collide (nearest-neighbour
/// sweep along the real axis).
inline void require_injective_ring(const std::vector<Complex>& ring, double tol) {
  const std::size_t n = ring.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ring[a].real() < ring[b].real(); });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n && ring[idx[j]].real() - ring[idx[i]].real() <= tol; ++j) {
      std::size_t a = idx[i], b = idx[j];
      std::size_t gap = a > b ? a - b : b - a;
      if (gap == 1 || gap == n - 1) continue;
      if (std::abs(ring[a] - ring[b]) <= tol)
        throw GeometryError("boundary image is not injective near (" + io::fmt(ring[a].real()) + "," +
                            io::fmt(ring[a].imag()) + ")");
    }
}

/// h(source) as a region: membership by winding number of the mapped source boundary,
/// sampled at `boundary_n` points.
inline PlanarRegion image_region(const MapHandle& h, const PlanarRegion& source, std::size_t boundary_n) {
  std::vector<Complex> ring = source.boundary(boundary_n);
  double diam = 0.0;
  for (auto& p : ring) {
    p = h(p);
    diam = std::max(diam, std::abs(p - ring.front()));
  }
  require_injective_ring(ring, 1e-12 * std::max(diam, 1e-300));
  auto map_all = [h](std::vector<Complex> pts) {
    for (auto& p : pts) p = h(p);
    return pts;
  };
  return {"image(" + source.kind + ")", [ring](Complex w) { return polygon_signed_distance(w, ring); },
          [ring](std::size_t) { return ring; },
          [source, map_all](std::size_t n, CounterRng rng) { return map_all(source.interior(n, rng)); }};
}

}  // namespace lypqc

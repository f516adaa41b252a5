#pragma once

#include <vector>

#include "core.hpp"
#include "curve.hpp"

namespace lypqc {

/// Curve constants entering the boundary argument bound. Every value is a sampled lower bound
/// of the corresponding supremum; `samples` records the density it was computed at.
struct ConstantEstimates {
  double l1 = 0.0;     // Hölder constant of the arc-length tangent
  double b_arc = 1.0;  // arc-chord constant
  double l2 = 0.0;     // (pi/2) l1 b_arc^{1+mu}
  double mu = 0.0;
  std::size_t samples = 0;
};

/// Unit tangents by central differences in arc length (one-sided at open ends, wrapped on
/// closed curves).
inline std::vector<Complex> unit_tangents(const SampledCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 3) throw DataError("need at least 3 samples for tangents");
  std::vector<Complex> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex d;
    if (curve.closed()) {
      d = curve[(i + 1) % n] - curve[(i + n - 1) % n];
    } else if (i == 0) {
      d = curve[1] - curve[0];
    } else if (i == n - 1) {
      d = curve[n - 1] - curve[n - 2];
    } else {
      d = curve[i + 1] - curve[i - 1];
    }
    double len = std::abs(d);
    if (!(len > 0)) throw DataError("degenerate tangent at sample " + std::to_string(i));
    t[i] = d / len;
  }
  return t;
}

/// Sampled Lyapunov multiplicative constant: max over sample pairs of
/// |g'(t) - g'(s)| / |t - s|^mu with t, s arc-length positions.
inline double estimate_l1(const SampledCurve& curve, double mu) {
  if (!(mu > 0 && mu < 1)) throw ParameterError("mu must lie in (0,1)");
  auto tan = unit_tangents(curve);
  auto s = curve.cum_length();
  double best = 0.0;
  for (std::size_t i = 0; i < tan.size(); ++i)
    for (std::size_t j = i + 1; j < tan.size(); ++j) {
      double ds = s[j] - s[i];
      double q = std::abs(tan[j] - tan[i]) / std::pow(ds, mu);
      best = std::max(best, q);
    }
  return best;
}

/// Shorter-arc to chord ratio for samples i < j.
inline double arc_chord_ratio(const SampledCurve& curve, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  double chord = std::abs(curve[j] - curve[i]);
  if (!(chord > 0)) throw DataError("coincident samples " + std::to_string(i) + " and " + std::to_string(j));
  double arc = curve.cum_length()[j] - curve.cum_length()[i];
  if (curve.closed()) arc = std::min(arc, curve.length() - arc);
  return arc / chord;
}

/// Arc-chord constant. Closed curves: max over all sample pairs. Open curves: the
/// at-a-point variant with respect to the first sample.
inline double estimate_arc_chord(const SampledCurve& curve) {
  double best = 1.0;
  if (curve.closed()) {
    for (std::size_t i = 0; i < curve.size(); ++i)
      for (std::size_t j = i + 1; j < curve.size(); ++j) best = std::max(best, arc_chord_ratio(curve, i, j));
  } else {
    for (std::size_t j = 1; j < curve.size(); ++j) best = std::max(best, arc_chord_ratio(curve, 0, j));
  }
  return best;
}

/// At-a-point arc-chord constant with respect to sample `index`.
inline double estimate_arc_chord_at(const SampledCurve& curve, std::size_t index) {
  double best = 1.0;
  for (std::size_t j = 0; j < curve.size(); ++j)
    if (j != index) best = std::max(best, arc_chord_ratio(curve, index, j));
  return best;
}

/// Second Lyapunov constant (pi/2) l1 b^{1+mu}.
inline double second_constant(double l1, double b_arc, double mu) {
  if (!(l1 >= 0)) throw ParameterError("l1 must be nonnegative");
  if (!(b_arc >= 1)) throw ParameterError("arc-chord constant must be at least 1");
  return pi / 2 * l1 * std::pow(b_arc, 1 + mu);
}

inline ConstantEstimates estimate_constants(const SampledCurve& curve, double mu) {
  ConstantEstimates e;
  e.mu = mu;
  e.samples = curve.size();
  e.l1 = estimate_l1(curve, mu);
  e.b_arc = estimate_arc_chord(curve);
  e.l2 = second_constant(e.l1, e.b_arc, mu);
  return e;
}

}  // namespace lypqc

#pragma once

#include "core.hpp"

namespace lypqc {

/// Orientation-preserving Euclidean isometry z -> e^{i rotation} z + translation.
struct Isometry {
  double rotation = 0.0;
  Complex translation{};

  Complex operator()(Complex z) const { return std::polar(1.0, rotation) * z + translation; }

  Isometry inverse() const {
    return {-rotation, -std::polar(1.0, -rotation) * translation};
  }

  /// (a * b)(z) = a(b(z)).
  friend Isometry operator*(const Isometry& a, const Isometry& b) {
    return {a.rotation + b.rotation, std::polar(1.0, a.rotation) * b.translation + a.translation};
  }

  /// Unit image of the direction i; the inner normal when built by make_T_b.
  Complex normal() const { return std::polar(1.0, rotation) * Complex(0, 1); }
};

inline Complex apply_isometry(const Isometry& iso, Complex z) { return iso(z); }

/// R_a(z) = e^{i alpha} z.
inline Isometry make_R_a(double alpha) { return {alpha, {}}; }

/// T_b(w) = -i e^{i beta} w + b: sends 0 to b and i to b + e^{i beta}.
inline Isometry make_T_b(Complex b, double beta) { return {beta - pi / 2, b}; }

/// T_b from a unit (or unnormalized) inner normal.
inline Isometry make_T_b_from_normal(Complex b, Complex normal) {
  if (std::abs(normal) == 0) throw GeometryError("zero normal");
  return make_T_b(b, std::arg(normal));
}

}  // namespace lypqc

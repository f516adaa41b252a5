#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lypqc {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Error taxonomy. Every module throws one of these; the CLI maps them to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Input parameters outside their admissible domain.
struct ParameterError : Error {
  using Error::Error;
};
/// Malformed sampled data (repeated points, non-monotone inputs).
struct DataError : Error {
  using Error::Error;
};
/// Evaluation outside a map's or operation's domain.
struct DomainError : Error {
  using Error::Error;
};
/// A solver failed to converge; carries the last residual.
struct NumericError : Error {
  NumericError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual(residual) {}
  double residual;
};
/// Geometric degeneracy (non-simple image boundary, degenerate tangent).
struct GeometryError : Error {
  using Error::Error;
};
/// A sampled precondition of a check does not hold; carries a witness point.
struct PreconditionError : Error {
  PreconditionError(const std::string& what, Complex witness)
      : Error(what), witness(witness) {}
  Complex witness;
};

/// Point of the extended plane: a finite complex number or the tagged point at infinity.
class ExtendedPoint {
 public:
  constexpr ExtendedPoint() = default;
  constexpr ExtendedPoint(Complex z) : z_(z) {}  // NOLINT(implicit)
  constexpr ExtendedPoint(double re, double im) : z_(re, im) {}

  static constexpr ExtendedPoint infinity() {
    ExtendedPoint p;
    p.infinite_ = true;
    return p;
  }

  constexpr bool is_infinity() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Finite value; throws DomainError on the infinity sentinel.
  Complex value() const {
    if (infinite_) throw DomainError("point at infinity has no finite value");
    return z_;
  }

  friend bool operator==(const ExtendedPoint& a, const ExtendedPoint& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.z_ == b.z_;
  }

 private:
  Complex z_{};
  bool infinite_ = false;
};

inline double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }
inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

/// Argument on the branch (-pi/2, 3pi/2] used by the region predicates.
inline double arg_upper_branch(Complex w) {
  double a = std::arg(w);
  if (a <= -pi / 2) a += 2 * pi;
  return a;
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace lypqc

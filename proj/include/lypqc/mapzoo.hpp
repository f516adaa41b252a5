#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "io.hpp"
#include "qhyperbolic.hpp"

namespace lypqc {

/// Wirtinger derivatives (dh/dz, dh/dzbar).
struct Wirtinger {
  Complex dz;
  Complex dzbar;

  double lambda() const { return std::abs(dz) - std::abs(dzbar); }
  double Lambda() const { return std::abs(dz) + std::abs(dzbar); }
  double jacobian() const { return std::norm(dz) - std::norm(dzbar); }
};

enum class DomainTag { unit_disk, upper_half_plane, plane, other };

/// Thrown when a composed map hands a point outside its successor's domain.
struct CompositionError : DomainError {
  using DomainError::DomainError;
};

/// An evaluable planar map. Evaluation functions enforce their own domain and throw
/// DomainError outside it; `boundary_distance` (distance to the boundary of the domain or to
/// a singular point) sizes finite-difference stencils.
class MapHandle {
 public:
  using EvalFn = std::function<Complex(Complex)>;
  using DerivFn = std::function<Wirtinger(Complex)>;
  using DistFn = std::function<double(Complex)>;

  MapHandle(std::string name, DomainTag tag, EvalFn eval, DistFn boundary_distance, DerivFn analytic = {},
            std::optional<double> declared_K = std::nullopt)
      : name_(std::move(name)),
        tag_(tag),
        eval_(std::move(eval)),
        dist_(std::move(boundary_distance)),
        analytic_(std::move(analytic)),
        declared_K_(declared_K) {}

  Complex operator()(Complex z) const { return eval_(z); }

  const std::string& name() const { return name_; }
  DomainTag domain_tag() const { return tag_; }
  std::optional<double> declared_K() const { return declared_K_; }
  bool has_analytic_derivatives() const { return static_cast<bool>(analytic_); }
  double boundary_distance(Complex z) const { return dist_(z); }

  /// Default stencil: max(1e-6, 1e-3 d) with d the boundary distance (capped at 1), and at
  /// most d/2 so the stencil stays interior.
  double default_step(Complex z) const {
    double d = dist_(z);
    if (!(d > 0)) throw DomainError(name_ + ": point is not interior");
    double step = std::max(1e-6, 1e-3 * std::min(d, 1.0));
    return std::min(step, 0.5 * d);
  }

  /// Centered differences: h_x, h_y by symmetric quotients, then dz = (h_x - i h_y)/2,
  /// dzbar = (h_x + i h_y)/2.
  Wirtinger finite_difference(Complex z, double step) const {
    Complex hx = (eval_(z + step) - eval_(z - step)) / (2 * step);
    Complex hy = (eval_(z + Complex(0, step)) - eval_(z - Complex(0, step))) / (2 * step);
    const Complex i(0, 1);
    return {(hx - i * hy) / 2.0, (hx + i * hy) / 2.0};
  }

  Wirtinger finite_difference(Complex z) const { return finite_difference(z, default_step(z)); }

  /// Analytic derivatives where available, else finite differences.
  Wirtinger derivatives(Complex z) const {
    if (analytic_) return analytic_(z);
    return finite_difference(z);
  }

  const EvalFn& eval_fn() const { return eval_; }
  const DerivFn& analytic_fn() const { return analytic_; }
  const DistFn& distance_fn() const { return dist_; }

 private:
  std::string name_;
  DomainTag tag_;
  EvalFn eval_;
  DistFn dist_;
  DerivFn analytic_;
  std::optional<double> declared_K_;
};

namespace detail {
inline double disk_distance(Complex z) { return 1.0 - std::abs(z); }
inline Complex require_closed_disk(Complex z, const std::string& who) {
  if (!(std::abs(z) <= 1.0 + 1e-12)) throw DomainError(who + ": point outside the closed unit disk");
  return z;
}
}  // namespace detail

/// Identity on the closed unit disk.
inline MapHandle make_identity() {
  return MapHandle(
      "identity", DomainTag::unit_disk, [](Complex z) { return detail::require_closed_disk(z, "identity"); },
      detail::disk_distance, [](Complex) { return Wirtinger{{1, 0}, {0, 0}}; }, 1.0);
}

/// Identity on the whole plane.
inline MapHandle make_plane_identity() {
  return MapHandle(
      "identity", DomainTag::plane, [](Complex z) { return z; },
      [](Complex) { return std::numeric_limits<double>::infinity(); },
      [](Complex) { return Wirtinger{{1, 0}, {0, 0}}; }, 1.0);
}

/// f(z) = z |z|^{1/K - 1}, K-quasiconformal, fixing 0 and infinity; f(0) = 0.
inline MapHandle make_radial_stretch(double K) {
  if (!(K >= 1)) throw ParameterError("K must be at least 1");
  const double s = 1.0 / K - 1.0;
  auto eval = [s](Complex z) {
    double r = std::abs(z);
    if (r == 0) return Complex(0, 0);
    return z * std::pow(r, s);
  };
  auto deriv = [s](Complex z) {
    double r = std::abs(z);
    if (r == 0) throw DomainError("radial stretch is not differentiable at 0");
    double rs = std::pow(r, s);
    return Wirtinger{Complex(rs * (1 + s / 2), 0), (s / 2) * rs * z / std::conj(z)};
  };
  return MapHandle("radial_stretch(K=" + io::fmt(K) + ")", DomainTag::plane, eval,
                   [](Complex z) { return std::abs(z); }, deriv, K);
}

/// Circle map psi with psi(t + 2pi) = psi(t) + 2pi and its derivative.
struct AngularProfile {
  std::function<double(double)> psi;
  std::function<double(double)> dpsi;
  std::string name;
};

/// psi(t) = t + a sin t, |a| < 1.
inline AngularProfile make_sine_profile(double a) {
  if (!(std::abs(a) < 1)) throw ParameterError("sine profile needs |a| < 1");
  return {[a](double t) { return t + a * std::sin(t); }, [a](double t) { return 1 + a * std::cos(t); },
          "t+" + io::fmt(a) + "*sin(t)"};
}

/// max over a uniform grid of max(psi', 1/psi'); throws DataError if psi is not increasing.
inline double angular_dilatation(const AngularProfile& profile, std::size_t grid = 4096) {
  double K = 1.0;
  for (std::size_t k = 0; k < grid; ++k) {
    double t = 2 * pi * static_cast<double>(k) / static_cast<double>(grid);
    double d = profile.dpsi(t);
    if (!(d > 0)) throw DataError("angular profile is not strictly increasing at t=" + io::fmt(t));
    K = std::max({K, d, 1.0 / d});
  }
  return K;
}

/// f(r e^{it}) = r e^{i psi(t)}; declared K from a 4096-point grid.
inline MapHandle make_angular_stretch(const AngularProfile& profile) {
  double K = angular_dilatation(profile, 4096);
  auto psi = profile.psi;
  auto dpsi = profile.dpsi;
  auto eval = [psi](Complex z) {
    double r = std::abs(z);
    if (r == 0) return Complex(0, 0);
    return std::polar(r, psi(std::arg(z)));
  };
  auto deriv = [psi, dpsi](Complex z) {
    if (std::abs(z) == 0) throw DomainError("angular stretch is not differentiable at 0");
    double t = std::arg(z), p = psi(t), d = dpsi(t);
    return Wirtinger{std::polar((1 + d) / 2, p - t), std::polar((1 - d) / 2, p + t)};
  };
  return MapHandle("angular_stretch(" + profile.name + ")", DomainTag::plane, eval,
                   [](Complex z) { return std::abs(z); }, deriv, K);
}

/// A(z) = z / ln(1/z) = -z / Log z on {|z| < radius, Im z > 0} (principal branch).
inline MapHandle make_log_quotient(double radius = 0.2) {
  if (!(radius > 0 && radius < 1)) throw ParameterError("validity radius must lie in (0,1)");
  auto dist = [radius](Complex z) { return std::min(radius - std::abs(z), z.imag()); };
  auto check = [dist](Complex z) {
    if (!(dist(z) > 0)) throw DomainError("log-quotient map evaluated outside its validity region");
  };
  auto eval = [check](Complex z) {
    check(z);
    return -z / std::log(z);
  };
  auto deriv = [check](Complex z) {
    check(z);
    Complex L = std::log(z);
    return Wirtinger{-1.0 / L + 1.0 / (L * L), {0, 0}};
  };
  return MapHandle("log_quotient", DomainTag::upper_half_plane, eval, dist, deriv, std::nullopt);
}

/// (a z + b) / (c z + d) on a caller-described domain; conformal (declared K = 1).
inline MapHandle make_mobius(Complex a, Complex b, Complex c, Complex d, DomainTag tag,
                             MapHandle::DistFn dist) {
  Complex det = a * d - b * c;
  if (std::abs(det) == 0) throw ParameterError("degenerate Möbius coefficients");
  auto eval = [=](Complex z) {
    Complex den = c * z + d;
    if (den == Complex(0, 0)) throw DomainError("Möbius map evaluated at its pole");
    return (a * z + b) / den;
  };
  auto deriv = [=](Complex z) {
    Complex den = c * z + d;
    if (den == Complex(0, 0)) throw DomainError("Möbius map evaluated at its pole");
    return Wirtinger{det / (den * den), {0, 0}};
  };
  return MapHandle("mobius", tag, eval, std::move(dist), deriv, 1.0);
}

/// Disk automorphism z -> (z - a) / (1 - conj(a) z), |a| < 1, on the closed disk.
inline MapHandle make_disk_automorphism(Complex a) {
  if (!(std::abs(a) < 1)) throw ParameterError("|a| must be below 1");
  auto m = make_mobius(1.0, -a, -std::conj(a), 1.0, DomainTag::unit_disk, detail::disk_distance);
  auto inner = m.eval_fn();
  return MapHandle("disk_automorphism(" + io::fmt(a.real()) + "," + io::fmt(a.imag()) + ")", DomainTag::unit_disk,
                   [inner](Complex z) { return inner(detail::require_closed_disk(z, "disk automorphism")); },
                   detail::disk_distance, m.analytic_fn(), 1.0);
}

/// A0 as a map handle from the closed upper half-plane to the disk.
inline MapHandle make_A0_map() {
  auto eval = [](Complex z) {
    if (z.imag() < -1e-12) throw DomainError("A0 handle is restricted to the closed upper half-plane");
    return mobius_A0(z).value();
  };
  auto deriv = [](Complex z) {
    Complex den = Complex(0, 4) + z;
    return Wirtinger{Complex(0, -8) / (den * den), {0, 0}};
  };
  return MapHandle("A0", DomainTag::upper_half_plane, eval, [](Complex z) { return z.imag(); }, deriv, 1.0);
}

// ---------------------------------------------------------------------------------------------
// Boundary functions and harmonic extension

/// Periodic boundary correspondence t in [0, 2pi) -> C.
class BoundaryFunction {
 public:
  enum class Interp { linear, trigonometric };

  static BoundaryFunction from_function(std::function<Complex(double)> f, std::string name = "function") {
    BoundaryFunction b;
    b.fn_ = std::move(f);
    b.name_ = std::move(name);
    return b;
  }

  /// Dense uniform samples at t_k = 2 pi k / n.
  static BoundaryFunction from_samples(std::vector<Complex> values, Interp interp) {
    if (values.size() < 8) throw DataError("boundary function needs at least 8 samples");
    BoundaryFunction b;
    b.samples_ = std::move(values);
    b.interp_ = interp;
    b.name_ = "samples";
    if (interp == Interp::trigonometric) b.coeffs_ = dft(b.samples_);
    return b;
  }

  /// CSV `t,re,im` with t uniform on [0, 2pi).
  static BoundaryFunction from_csv(std::string_view text, Interp interp) {
    auto t = io::parse_csv(text, {"t", "re", "im"});
    const std::size_t n = t.rows.size();
    if (n < 8) throw DataError("boundary CSV needs at least 8 rows");
    std::vector<Complex> vals;
    for (std::size_t k = 0; k < n; ++k) {
      double expect = 2 * pi * static_cast<double>(k) / static_cast<double>(n);
      if (std::abs(t.rows[k][0] - expect) > 1e-9)
        throw DataError("boundary CSV row " + std::to_string(k + 2) + ": t is not uniform on [0, 2pi)");
      vals.emplace_back(t.rows[k][1], t.rows[k][2]);
    }
    return from_samples(std::move(vals), interp);
  }

  Complex operator()(double t) const {
    if (fn_) return fn_(t);
    const std::size_t n = samples_.size();
    double u = t / (2 * pi);
    u -= std::floor(u);
    if (interp_ == Interp::linear) {
      double x = u * static_cast<double>(n);
      auto k = static_cast<std::size_t>(x) % n;
      double f = x - std::floor(x);
      return samples_[k] * (1 - f) + samples_[(k + 1) % n] * f;
    }
    // trigonometric: coefficients indexed k = 0..n-1, frequencies folded to (-n/2, n/2]
    Complex s{};
    for (std::size_t k = 0; k < n; ++k) {
      auto kk = static_cast<long>(k);
      long freq = kk <= static_cast<long>(n / 2) ? kk : kk - static_cast<long>(n);
      if (n % 2 == 0 && kk == static_cast<long>(n / 2)) {
        s += coeffs_[k] * std::cos(static_cast<double>(freq) * 2 * pi * u);
      } else {
        s += coeffs_[k] * std::polar(1.0, static_cast<double>(freq) * 2 * pi * u);
      }
    }
    return s;
  }

  std::vector<Complex> sample(std::size_t n) const {
    if (!fn_ && n == samples_.size()) return samples_;
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = (*this)(2 * pi * static_cast<double>(k) / static_cast<double>(n));
    return out;
  }

  /// Argument strictly increasing over one period with total winding 2pi.
  bool is_sense_preserving_homeomorphism(std::size_t n = 4096) const {
    auto v = sample(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex a = v[k], b = v[(k + 1) % n];
      if (std::abs(a) == 0 || std::abs(b) == 0) return false;
      double step = std::arg(b / a);
      if (!(step > 0)) return false;
      total += step;
    }
    return std::abs(total - 2 * pi) < 1e-9;
  }

  std::string to_csv(std::size_t n) const {
    io::CsvTable t{{"t", "re", "im"}, {}};
    auto v = sample(n);
    for (std::size_t k = 0; k < n; ++k)
      t.rows.push_back({2 * pi * static_cast<double>(k) / static_cast<double>(n), v[k].real(), v[k].imag()});
    return t.to_string();
  }

  const std::string& name() const { return name_; }

  /// Naive DFT, c_k = (1/n) sum_j v_j e^{-2 pi i jk/n}.
  static std::vector<Complex> dft(const std::vector<Complex>& v) {
    const std::size_t n = v.size();
    std::vector<Complex> c(n);
    for (std::size_t k = 0; k < n; ++k) {
      Complex s{};
      for (std::size_t j = 0; j < n; ++j)
        s += v[j] * std::polar(1.0, -2 * pi * static_cast<double>((j * k) % n) / static_cast<double>(n));
      c[k] = s / static_cast<double>(n);
    }
    return c;
  }

 private:
  std::function<Complex(double)> fn_;
  std::vector<Complex> samples_;
  std::vector<Complex> coeffs_;
  Interp interp_ = Interp::linear;
  std::string name_;
};

/// t -> e^{i(t + a sin t)}: a sense-preserving circle diffeomorphism for |a| < 1.
inline BoundaryFunction make_circle_homeomorphism(double a) {
  if (!(std::abs(a) < 1)) throw ParameterError("need |a| < 1");
  return BoundaryFunction::from_function([a](double t) { return std::polar(1.0, t + a * std::sin(t)); },
                                         "exp(i(t+" + io::fmt(a) + " sin t))");
}

/// Poisson integral with the periodic trapezoid rule on n nodes; evaluation is limited to
/// |z| <= 1 - 10/n so the kernel peak stays resolved.
inline MapHandle poisson_extend(const BoundaryFunction& boundary, std::size_t quadrature_n) {
  if (quadrature_n < 64) throw ParameterError("quadrature needs at least 64 nodes");
  auto values = boundary.sample(quadrature_n);
  std::vector<Complex> nodes(quadrature_n);
  for (std::size_t j = 0; j < quadrature_n; ++j)
    nodes[j] = std::polar(1.0, 2 * pi * static_cast<double>(j) / static_cast<double>(quadrature_n));
  const double cap = 1.0 - 10.0 / static_cast<double>(quadrature_n);
  const double inv_n = 1.0 / static_cast<double>(quadrature_n);
  auto check = [cap](Complex z) {
    if (!(std::abs(z) <= cap)) throw DomainError("Poisson extension evaluated beyond radius " + io::fmt(cap));
  };
  auto eval = [=](Complex z) {
    check(z);
    double num = 1.0 - std::norm(z);
    Complex s{};
    for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * (num / std::norm(nodes[j] - z));
    return s * inv_n;
  };
  auto deriv = [=](Complex z) {
    check(z);
    Complex dz{}, dzb{};
    for (std::size_t j = 0; j < values.size(); ++j) {
      Complex d = nodes[j] - z;
      Complex k = nodes[j] / (d * d);
      dz += values[j] * k;
      dzb += values[j] * std::conj(k);
    }
    return Wirtinger{dz * inv_n, dzb * inv_n};
  };
  return MapHandle("poisson(" + boundary.name() + ")", DomainTag::unit_disk, eval,
                   [cap](Complex z) { return cap - std::abs(z); }, deriv, std::nullopt);
}

/// Largest radius at which a Poisson handle with n nodes may be evaluated.
inline double poisson_radius_cap(std::size_t quadrature_n) { return 1.0 - 10.0 / static_cast<double>(quadrature_n); }

// ---------------------------------------------------------------------------------------------
// Dilatation

struct DilatationSample {
  Complex z;
  double lambda = 0.0;  // |dh| - |dh_bar|
  double Lambda = 0.0;  // |dh| + |dh_bar|
  double D = 1.0;       // Lambda / lambda, +inf when lambda <= 0
};

inline DilatationSample dilatation_from(Complex z, const Wirtinger& w) {
  DilatationSample s{z, w.lambda(), w.Lambda(), std::numeric_limits<double>::infinity()};
  if (s.lambda > 0) s.D = s.Lambda / s.lambda;
  return s;
}

inline DilatationSample dilatation_at(const MapHandle& map, Complex z) { return dilatation_from(z, map.derivatives(z)); }

struct DilatationScan {
  std::vector<DilatationSample> samples;
  double min_lambda = std::numeric_limits<double>::infinity();
  Complex argmin_lambda{};
  double max_Lambda = 0.0;
  Complex argmax_Lambda{};
  double max_D = 1.0;
  Complex argmax_D{};
  std::vector<Complex> degenerate;  // lambda <= 0: orientation or degeneracy warnings

  std::string to_csv() const {
    io::CsvTable t{{"re", "im", "lambda", "Lambda", "D"}, {}};
    for (auto& s : samples) t.rows.push_back({s.z.real(), s.z.imag(), s.lambda, s.Lambda, s.D});
    return t.to_string();
  }
};

enum class DerivativeMode { automatic, finite_difference };

inline DilatationScan dilatation_scan(const MapHandle& map, const std::vector<Complex>& grid,
                                      DerivativeMode mode = DerivativeMode::automatic) {
  DilatationScan scan;
  scan.samples.reserve(grid.size());
  for (Complex z : grid) {
    auto w = mode == DerivativeMode::finite_difference ? map.finite_difference(z) : map.derivatives(z);
    auto s = dilatation_from(z, w);
    scan.samples.push_back(s);
    if (s.lambda < scan.min_lambda) {
      scan.min_lambda = s.lambda;
      scan.argmin_lambda = z;
    }
    if (s.Lambda > scan.max_Lambda) {
      scan.max_Lambda = s.Lambda;
      scan.argmax_Lambda = z;
    }
    if (s.D > scan.max_D) {
      scan.max_D = s.D;
      scan.argmax_D = z;
    }
    if (!(s.lambda > 0)) scan.degenerate.push_back(z);
  }
  return scan;
}

// ---------------------------------------------------------------------------------------------
// Composition

/// Applies maps in list order: compose({f, g})(z) = g(f(z)). Wirtinger derivatives follow
/// d(G o F) = (dG o F) dF + (dbarG o F) conj(dbarF) and
/// dbar(G o F) = (dG o F) dbarF + (dbarG o F) conj(dF).
inline MapHandle compose(const std::vector<MapHandle>& maps, const std::vector<Complex>& validation_points = {}) {
  if (maps.empty()) throw ParameterError("nothing to compose");
  bool analytic = std::all_of(maps.begin(), maps.end(), [](const MapHandle& m) { return m.has_analytic_derivatives(); });
  std::optional<double> K = 1.0;
  std::string name;
  for (auto& m : maps) {
    if (m.declared_K() && K) {
      K = *K * *m.declared_K();
    } else {
      K.reset();
    }
    name += (name.empty() ? "" : " then ") + m.name();
  }
  auto eval = [maps](Complex z) {
    Complex w = maps.front()(z);
    for (std::size_t i = 1; i < maps.size(); ++i) {
      try {
        w = maps[i](w);
      } catch (const DomainError& e) {
        throw CompositionError("composition step " + std::to_string(i) + " (" + maps[i].name() + "): " + e.what());
      }
    }
    return w;
  };
  MapHandle::DerivFn deriv;
  if (analytic) {
    deriv = [maps](Complex z) {
      Complex w = z;
      Wirtinger acc{{1, 0}, {0, 0}};
      for (auto& m : maps) {
        Wirtinger g = m.analytic_fn()(w);
        acc = {g.dz * acc.dz + g.dzbar * std::conj(acc.dzbar), g.dz * acc.dzbar + g.dzbar * std::conj(acc.dz)};
        w = m(w);
      }
      return acc;
    };
  }
  MapHandle out(name, maps.front().domain_tag(), eval, maps.front().distance_fn(), deriv, K);
  for (Complex z : validation_points) out(z);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Numeric conformal map of the disk onto a starlike domain

struct TheodorsenResult {
  MapHandle map;
  std::vector<double> residuals;
  std::vector<Complex> series;  // f(z) = z exp(sum_k series[k] z^k)
};

namespace detail {
// Radius of a starlike curve in direction theta, found by bisection on the curve parameter.
class StarlikeRadius {
 public:
  StarlikeRadius(const BoundaryFunction& b, std::size_t n) : b_(b), n_(n) {
    t_.resize(n + 1);
    phi_.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      t_[k] = 2 * pi * static_cast<double>(k) / static_cast<double>(n);
      Complex w = b(t_[k]);
      if (std::abs(w) == 0) throw DataError("starlike boundary passes through the center");
      if (k == 0) {
        phi_[k] = std::arg(w);
      } else {
        double step = std::arg(w / b(t_[k - 1]));
        if (!(step > 0)) throw DataError("boundary is not starlike about 0 (argument not increasing)");
        phi_[k] = phi_[k - 1] + step;
      }
    }
    if (std::abs(phi_[n] - phi_[0] - 2 * pi) > 1e-9) throw DataError("boundary does not wind once around 0");
  }

  double operator()(double theta) const {
    double th = phi_[0] + std::fmod(std::fmod(theta - phi_[0], 2 * pi) + 2 * pi, 2 * pi);
    auto it = std::upper_bound(phi_.begin(), phi_.end(), th);
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - phi_.begin() - 1, 0)), n_ - 1);
    double lo = t_[k], hi = t_[k + 1];
    Complex dir = std::polar(1.0, th);
    for (int i = 0; i < 60; ++i) {
      double mid = 0.5 * (lo + hi);
      (std::arg(b_(mid) / dir) < 0 ? lo : hi) = mid;
    }
    return std::abs(b_(0.5 * (lo + hi)));
  }

 private:
  const BoundaryFunction& b_;
  std::size_t n_;
  std::vector<double> t_, phi_;
};
}  // namespace detail

/// Theodorsen iteration theta <- t + K[ln rho(theta)] with K the periodic conjugate-function
/// operator. The result fixes 0 with f'(0) > 0. Damping 0.5 switches on once the residual grows.
inline TheodorsenResult theodorsen_conformal(const BoundaryFunction& starlike_boundary, int iterations = 200,
                                             double tol = 1e-10, std::size_t nodes = 512) {
  detail::StarlikeRadius rho(starlike_boundary, 8 * nodes);
  const std::size_t n = nodes;
  std::vector<double> t(n), theta(n);
  for (std::size_t j = 0; j < n; ++j) theta[j] = t[j] = 2 * pi * static_cast<double>(j) / static_cast<double>(n);
  std::vector<double> residuals;
  double damping = 1.0;
  std::vector<Complex> coeffs;
  auto log_radius_coeffs = [&](const std::vector<double>& th) {
    std::vector<Complex> u(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = std::log(rho(th[j]));
    return BoundaryFunction::dft(u);
  };
  bool converged = false;
  for (int it = 0; it < iterations; ++it) {
    coeffs = log_radius_coeffs(theta);
    double res = 0.0;
    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) {
      // conjugate function of a real series: sum over 0 < k < n/2 of 2 Im(c_k e^{ikt})
      double v = 0.0;
      for (std::size_t k = 1; k < n / 2; ++k)
        v += 2 * (coeffs[k] * std::polar(1.0, static_cast<double>((k * j) % n) * 2 * pi / static_cast<double>(n))).imag();
      next[j] = t[j] + v;
      res = std::max(res, std::abs(next[j] - theta[j]));
    }
    if (!residuals.empty() && res > residuals.back()) damping = 0.5;
    residuals.push_back(res);
    for (std::size_t j = 0; j < n; ++j) theta[j] += damping * (next[j] - theta[j]);
    if (res < tol) {
      converged = true;
      coeffs = log_radius_coeffs(theta);
      break;
    }
  }
  if (!converged) {
    std::string hist;
    for (std::size_t i = residuals.size() > 5 ? residuals.size() - 5 : 0; i < residuals.size(); ++i)
      hist += (hist.empty() ? "" : ",") + io::fmt(residuals[i]);
    throw NumericError("Theodorsen iteration did not converge; last residuals [" + hist + "]",
                       residuals.empty() ? 0.0 : residuals.back());
  }
  // g(z) = c_0 + 2 sum_{0<k<n/2} c_k z^k has Re g = ln rho(theta(t)) on the circle.
  std::vector<Complex> series(n / 2);
  series[0] = Complex(coeffs[0].real(), 0);
  for (std::size_t k = 1; k < n / 2; ++k) series[k] = 2.0 * coeffs[k];
  auto g_and_dg = [series](Complex z) {
    Complex g{}, dg{};
    for (std::size_t k = series.size(); k-- > 0;) {
      g = g * z + series[k];
      if (k > 0) dg = dg * z + static_cast<double>(k) * series[k];
    }
    return std::pair{g, dg};
  };
  auto eval = [g_and_dg](Complex z) {
    detail::require_closed_disk(z, "conformal map");
    return z * std::exp(g_and_dg(z).first);
  };
  auto deriv = [g_and_dg](Complex z) {
    detail::require_closed_disk(z, "conformal map");
    auto [g, dg] = g_and_dg(z);
    return Wirtinger{std::exp(g) * (1.0 + z * dg), {0, 0}};
  };
  MapHandle map("theodorsen(" + starlike_boundary.name() + ")", DomainTag::unit_disk, eval, detail::disk_distance,
                deriv, 1.0);
  return {map, residuals, series};
}

/// Min and max of |f(z1) - f(z2)| / |z1 - z2| over all pairs of the given points.
inline std::pair<double, double> difference_quotient_band(const MapHandle& map, const std::vector<Complex>& pts) {
  std::vector<Complex> img;
  img.reserve(pts.size());
  for (Complex z : pts) img.push_back(map(z));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d = std::abs(pts[i] - pts[j]);
      if (d == 0) continue;
      double q = std::abs(img[i] - img[j]) / d;
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  return {lo, hi};
}

// ---------------------------------------------------------------------------------------------
// Grids and distance comparability

/// Polar grid: radii (k + 1) r_max / n_r, angles 2 pi j / n_t (+ half-step offset on odd rings).
inline std::vector<Complex> disk_polar_grid(std::size_t n_r, std::size_t n_t, double r_max) {
  std::vector<Complex> g;
  g.reserve(n_r * n_t);
  for (std::size_t k = 0; k < n_r; ++k) {
    double r = r_max * static_cast<double>(k + 1) / static_cast<double>(n_r);
    double off = (k % 2) ? 0.5 : 0.0;
    for (std::size_t j = 0; j < n_t; ++j)
      g.push_back(std::polar(r, 2 * pi * (static_cast<double>(j) + off) / static_cast<double>(n_t)));
  }
  return g;
}

/// Distance from q to a closed polyline.
inline double distance_to_polyline(Complex q, const std::vector<Complex>& ring) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    Complex a = ring[i], b = ring[(i + 1) % n];
    Complex ab = b - a;
    double len2 = std::norm(ab);
    double s = len2 > 0 ? std::clamp(dot(q - a, ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, std::abs(q - (a + s * ab)));
  }
  return best;
}

/// Ratios d(z) Lambda_h(z) / d_h(z) over a disk grid, where d(z) = 1 - |z| and d_h is the
/// distance from h(z) to the sampled image boundary.
struct ComparabilityScan {
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::size_t samples = 0;
};

inline ComparabilityScan distance_comparability(const MapHandle& map, const std::vector<Complex>& image_boundary,
                                                const std::vector<Complex>& grid) {
  ComparabilityScan s;
  for (Complex z : grid) {
    double d = 1.0 - std::abs(z);
    double dh = distance_to_polyline(map(z), image_boundary);
    double ratio = d * map.derivatives(z).Lambda() / dh;
    s.min_ratio = std::min(s.min_ratio, ratio);
    s.max_ratio = std::max(s.max_ratio, ratio);
    ++s.samples;
  }
  return s;
}

}  // namespace lypqc

// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include "lypqc/lypqc.hpp"
#include "lypqc/scenario.hpp"

using namespace lypqc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// ---------------------------------------------------------------------------------------------

Outcome qh_metric() {
  CounterRng rng(CounterRng(101).substream("qh"));
  auto point = [&rng] { return std::polar(std::exp(rng.uniform(-6, 6)), rng.uniform(-pi, pi)); };
  double worst_rel = 0;
  std::size_t asym = 0, triangle = 0;
  for (int k = 0; k < 10000; ++k) {
    Complex z1 = point(), z2 = point(), z3 = point();
    long double x1 = z1.real(), y1 = z1.imag(), x2 = z2.real(), y2 = z2.imag();
    long double th = std::atan2(std::fabs(x1 * y2 - y1 * x2), x1 * x2 + y1 * y2);
    long double lr = std::log(std::hypot(x2, y2) / std::hypot(x1, y1));
    long double ref = std::sqrt(lr * lr + th * th);
    double got = qh_distance(z1, z2);
    if (ref > 0) worst_rel = std::max(worst_rel, static_cast<double>(std::fabs(got - ref) / ref));
    if (qh_distance(z2, z1) != got) ++asym;
    if (qh_distance(z1, z3) > (qh_distance(z1, z2) + qh_distance(z2, z3)) * (1 + 1e-14)) ++triangle;
  }
  return {worst_rel < 1e-12 && asym == 0 && triangle == 0,
          "max rel err " + num(worst_rel) + ", asymmetric " + std::to_string(asym) + ", triangle violations " +
              std::to_string(triangle)};
}

Outcome mobius_identities() {
  CounterRng rng(CounterRng(102).substream("mobius"));
  auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  std::size_t xy = 0, yx = 0, fixed = 0, a0 = 0, tested = 0;
  for (int k = 0; k < 100000; ++k) {
    Complex p = std::polar(std::exp(rng.uniform(-3, 3)), rng.uniform(-pi, pi));
    Complex z = std::polar(std::exp(rng.uniform(-3, 3)), rng.uniform(-pi, pi));
    if (std::abs(z - p) < 1e-3 * std::abs(p) || std::abs(z + p) < 1e-3 * std::abs(p)) continue;
    ++tested;
    auto y = mobius_Y(p, z), x = mobius_X(p, z);
    if (!(y.is_finite() && mobius_X(p, y).is_finite() && rel(mobius_X(p, y).value(), z) <= 1e-10)) ++xy;
    if (!(x.is_finite() && mobius_Y(p, x).is_finite() && rel(mobius_Y(p, x).value(), z) <= 1e-10)) ++yx;
    bool ok = mobius_X(p, Complex(0, 0)).value() == Complex(0, 0) && mobius_X(p, p).is_infinity() &&
              std::abs(mobius_X(p, ExtendedPoint::infinity()).value() - p) <= 1e-10 * std::abs(p) &&
              std::abs(mobius_Y(p, ExtendedPoint::infinity()).value() + p) <= 1e-10 * std::abs(p);
    if (!ok) ++fixed;
    double x_real = rng.uniform(-1e4, 1e4);
    if (std::abs(std::abs(mobius_A0(Complex(x_real, 0)).value()) - 1) > 1e-10) ++a0;
  }
  bool a0_fixed = std::abs(mobius_A0(Complex(0, 0)).value() - 1.0) <= 1e-10 && mobius_A0(Complex(0, -4)).is_infinity();
  return {xy == 0 && yx == 0 && fixed == 0 && a0 == 0 && a0_fixed,
          std::to_string(tested) + " points: X(Y z)!=z " + std::to_string(xy) + ", Y(X z)!=z " + std::to_string(yx) +
              ", fixed-value failures " + std::to_string(fixed) + ", |A0(x)|!=1 " + std::to_string(a0) +
              ", A0(0)=1 and A0(-4i)=inf " + (a0_fixed ? "ok" : "wrong")};
}

Outcome x_angle_bound() {
  std::string detail;
  std::size_t total = 0;
  for (Complex p : {Complex(0, 4), Complex(3, 3), Complex(-5, 0)}) {
    CounterRng rng(CounterRng(103).substream("xangle/" + io::fmt(p.real()) + "," + io::fmt(p.imag())));
    const double r0 = std::abs(p) / 2;
    std::size_t bad = 0;
    double worst = std::numeric_limits<double>::infinity(), worst_r = 0;
    for (int k = 0; k < 1000; ++k) {
      double r = r0 * std::sqrt(rng.uniform());
      if (r == 0) continue;
      auto rec = check_X_angle_bound(p, std::polar(r, rng.uniform(-pi, pi)), std::polar(r, rng.uniform(-pi, pi)));
      if (!rec.satisfied) ++bad;
      if (rec.margin < worst) {
        worst = rec.margin;
        worst_r = r;
      }
    }
    total += bad;
    detail += (detail.empty() ? "" : "; ") + std::string("p=") + io::fmt(p.real()) + (p.imag() < 0 ? "" : "+") +
              io::fmt(p.imag()) + "i violations " + std::to_string(bad) + " worst margin " + num(worst) + " at |z|=" +
              num(worst_r);
  }
  return {total == 0, detail};
}

Outcome dilatation_oracle() {
  auto grid = disk_polar_grid(20, 50, 0.95);
  auto f = make_radial_stretch(2);
  auto an = dilatation_scan(f, grid);
  auto fd = dilatation_scan(f, grid, DerivativeMode::finite_difference);
  double an_err = 0, fd_err = 0;
  for (auto& s : an.samples) an_err = std::max(an_err, std::abs(s.D - 2));
  for (auto& s : fd.samples) fd_err = std::max(fd_err, std::abs(s.D - 2));
  auto id = dilatation_scan(make_identity(), grid);
  bool id_exact = true;
  for (auto& s : id.samples) id_exact = id_exact && s.D == 1.0;
  return {grid.size() == 1000 && an_err <= 1e-6 && fd_err <= 1e-3 && id_exact,
          std::to_string(grid.size()) + " points: max D analytic " + num(an.max_D) + " (err " + num(an_err) +
              "), finite difference " + num(fd.max_D) + " (err " + num(fd_err) + "), identity D=1 " +
              (id_exact ? "exact" : "inexact")};
}

Outcome lemma_fixture() {
  auto base = check_lemma_distance(1, 0.5, 0.01);
  bool eps0_ok = std::abs(base.eps0 - 2.0 / 3.0) <= 1e-9;
  std::size_t bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 200; ++k) {
    auto r = check_lemma_distance(1, 0.5, base.C * (k / 200.0), 1000000);
    if (!r.satisfied()) ++bad;
    worst = std::min(worst, 2 * r.d_prime / r.d);
  }
  CounterRng rng(CounterRng(105).substream("lemma"));
  std::size_t sweep_bad = 0;
  for (int k = 0; k < 100; ++k) {
    double c = rng.uniform(0.1, 5), mu = rng.uniform(0.1, 0.9);
    double C = c * std::pow(solve_eps0(c, mu), 1 + mu);
    for (int j = 1; j <= 10; ++j)
      if (!check_lemma_distance(c, mu, C * (j / 10.0), 100000).satisfied()) ++sweep_bad;
  }
  return {eps0_ok && bad == 0 && sweep_bad == 0,
          "eps0 " + io::fmt(base.eps0) + ", C " + num(base.C) + ", fixture violations " + std::to_string(bad) +
              " (min 2d'/d " + num(worst) + "), random sweep violations " + std::to_string(sweep_bad) + "/1000"};
}

Outcome boundary_arg() {
  auto graph = build_graph_curve(1, 0.5, 0.5, 2001);
  auto circle = build_circle_curve({0, 1}, 1, 2000, -pi / 2);
  auto g = check_boundary_arg_bound(graph, 0.5, 0.3);
  auto c = check_boundary_arg_bound(circle, 0.5, 0.5);
  return {g.satisfied() && c.satisfied() && g.worst_margin > 0 && c.worst_margin > 0,
          "graph: c=l2=" + num(g.c) + " samples " + std::to_string(g.samples_tested) + " worst margin " +
              num(g.worst_margin) + "; circle: c=l2=" + num(c.c) + " samples " + std::to_string(c.samples_tested) +
              " worst margin " + num(c.worst_margin)};
}

Outcome end_to_end() {
  auto h = make_radial_stretch(2);
  const double eps = 0.5, c = 1, mu = 0.5, K1 = 2;
  std::vector<Complex> pts;
  CounterRng rng(CounterRng(107).substream("holder"));
  while (pts.size() < 4000) {
    Complex z = rng.in_disk();
    if (z.imag() > 0) pts.push_back(z);
  }
  auto hol = check_holder_at_zero(h, HolderCheckParams(K1, 1, pts));
  const double l0 = hol.tightest_l0;
  auto D0 = lyp_region(make_lyp_region(eps, c, mu));
  auto chain = transform_region_params(eps, c, mu, K1, l0, 1);
  auto c1 = derive_c1(h, D0, chain.eps, chain.mu, 0.1, 10000, 7001);
  auto H0 = lyp_region({chain.eps, c1.c1, chain.mu});
  auto fwd = check_inclusion_forward(h, H0, D0, 10000, 7002);
  auto half = check_inclusion_forward(h, H0, lyp_region(make_lyp_region(eps / 2, c, mu)), 10000, 7002);
  bool witnesses_real = !half.violations.empty();
  for (auto& v : half.violations) witnesses_real = witnesses_real && !region_contains({eps / 2, c, mu}, v.point);
  return {hol.satisfied && fwd.verdict() && fwd.violations.empty() && !half.verdict() && witnesses_real,
          "l0 " + num(l0) + ", eps1 " + num(chain.eps) + ", mu1 " + num(chain.mu) + ", c1 " + num(c1.c1) +
              "; forward samples " + std::to_string(fwd.samples_tested) + " violations " +
              std::to_string(fwd.violations.size()) + " min margin " + num(fwd.min_margin) +
              "; halved target violations " + std::to_string(half.violations.size())};
}

Outcome triple() {
  TripleConfig cfg;
  auto pts = unit_circle_points(32);
  auto mob = check_triple(pts, make_triple_factory(make_disk_automorphism({0.3, 0}), cfg), cfg.samples, 8001);
  auto id = check_triple(pts, make_triple_factory(make_identity(), cfg), cfg.samples, 8001);
  bool mob_ok = mob.size() == 32;
  double mob_min = std::numeric_limits<double>::infinity();
  for (auto& r : mob) {
    mob_ok = mob_ok && r.inner_in_mid.verdict() && r.mid_in_outer.verdict();
    mob_min = std::min(mob_min, r.min_margin());
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (auto& r : id) {
    lo = std::min(lo, r.min_margin());
    hi = std::max(hi, r.min_margin());
  }
  return {mob_ok && mob_min > 0 && hi - lo <= 1e-6,
          "Mobius: 32 points min margin " + num(mob_min) + "; identity margin spread " + num(hi - lo) + " (min " +
              num(lo) + ")"};
}

Outcome harnack() {
  auto h = poisson_extend(make_circle_homeomorphism(0.3), 2048);
  std::vector<Complex> images;
  for (Complex a : unit_circle_points(1024)) images.push_back(boundary_value(h, a));
  double R0 = estimate_R0(h(0.0), images);
  auto grid = disk_polar_grid(20, 50, 0.95);
  auto rep = check_harnack_lower(h, -1.0, 1.0, R0, grid, images);
  return {rep.satisfied() && rep.samples == 1000,
          "R0 " + num(R0) + ", samples " + std::to_string(rep.samples) + ", min ratio " + num(rep.min_ratio) +
              ", violations " + std::to_string(rep.violations)};
}

Outcome colip_contrast() {
  auto h = poisson_extend(make_circle_homeomorphism(0.3), 4096);
  std::vector<double> shells{0.1, 0.05, 0.01};
  std::vector<std::vector<Complex>> rings;
  for (double d : shells) rings.push_back(circle_points(1 - d, 256));
  auto flat = colip_trend(h, shells, rings);
  bool flat_ok = flat.trend == Trend::flat;
  for (auto& s : flat.shells) flat_ok = flat_ok && s.min_lambda > 0;

  auto A = make_log_quotient();
  std::vector<double> levels;
  std::vector<std::vector<Complex>> arcs;
  for (int k = 2; k <= 6; ++k) {
    levels.push_back(std::pow(10.0, -k));
    arcs.push_back(upper_semicircle(levels.back(), 64));
  }
  auto dec = colip_trend(A, levels, arcs);
  double worst_ratio = 0;
  for (std::size_t k = 1; k < dec.shells.size(); ++k)
    worst_ratio = std::max(worst_ratio, dec.shells[k].min_lambda / dec.shells[k - 1].min_lambda);
  std::string flat_mins, dec_mins;
  for (auto& s : flat.shells) flat_mins += (flat_mins.empty() ? "" : ",") + num(s.min_lambda);
  for (auto& s : dec.shells) dec_mins += (dec_mins.empty() ? "" : ",") + num(s.min_lambda);
  return {flat_ok && dec.strictly_decreasing && worst_ratio < 0.5,
          std::string("Poisson trend ") + trend_name(flat.trend) + " [" + flat_mins + "]; log quotient " +
              (dec.strictly_decreasing ? "strictly decreasing" : "not strictly decreasing") + " [" + dec_mins +
              "], largest per-decade ratio " + num(worst_ratio) + " (required < 0.5)"};
}

Outcome mori() {
  auto rep = check_mori(make_radial_stretch(2), 2, 10000, CounterRng(CounterRng(111).substream("mori")));
  return {rep.satisfied() && rep.pairs == 10000,
          std::to_string(rep.pairs) + " pairs, max ratio " + num(rep.max_ratio) + " (bound 16), violations " +
              std::to_string(rep.violations)};
}

Outcome determinism() {
  const fs::path dir = LYPQC_SCENARIO_DIR;
  const fs::path root = fs::temp_directory_path() / "lypqc_acceptance";
  fs::remove_all(root);
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".ini") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::size_t artifacts = 0, differing = 0;
  std::string first_diff;
  for (auto& f : files) {
    for (auto verb : {scenario::Verb::construct, scenario::Verb::measure, scenario::Verb::verify}) {
      std::string tag = f.stem().string() + "_" + std::to_string(static_cast<int>(verb));
      std::map<std::string, std::string> runs[2];
      for (int i = 0; i < 2; ++i) {
        scenario::RunOptions opt;
        opt.out = root / (tag + "_" + std::to_string(i));
        std::ostringstream log;
        scenario::run(f, verb, opt, log);
        if (!fs::exists(*opt.out)) continue;
        for (auto& e : fs::recursive_directory_iterator(*opt.out))
          if (e.is_regular_file()) runs[i][fs::relative(e.path(), *opt.out).string()] = io::read_file(e.path());
      }
      for (auto& [name, bytes] : runs[0]) {
        auto ext = fs::path(name).extension();
        if (ext == ".csv" || ext == ".svg") ++artifacts;
        auto it = runs[1].find(name);
        if (it == runs[1].end() || it->second != bytes) {
          ++differing;
          if (first_diff.empty()) first_diff = tag + "/" + name;
        }
      }
      if (runs[1].size() != runs[0].size()) ++differing;
    }
  }
  fs::remove_all(root);
  return {artifacts > 0 && differing == 0,
          std::to_string(files.size()) + " scenarios, " + std::to_string(artifacts) + " CSV/SVG artifacts, " +
              std::to_string(differing) + " differing" + (first_diff.empty() ? "" : " (first: " + first_diff + ")")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "quasihyperbolic metric", 1, qh_metric},
      {2, "Mobius identities", 1, mobius_identities},
      {3, "X angle bound", 1, x_angle_bound},
      {4, "dilatation oracle", 5, dilatation_oracle},
      {5, "graph distance lemma", 30, lemma_fixture},
      {6, "boundary argument bound", 10, boundary_arg},
      {7, "radial stretch chain", 20, end_to_end},
      {8, "boundary triples", 60, triple},
      {9, "Harnack lower bound", 60, harnack},
      {10, "co-Lipschitz contrast", 120, colip_contrast},
      {11, "Mori bound", 2, mori},
      {12, "determinism", 0, determinism},
  };
  int failed = 0;
  for (auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_s == 0 || secs < c.limit_s;
    bool ok = out.pass && in_time;
    if (!ok) ++failed;
    std::string limit = c.limit_s == 0 ? "" : " / " + num(c.limit_s) + " s";
    std::printf("%s criterion %d: %s: %s [%.2f s%s%s]\n", ok ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs,
                limit.c_str(), in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

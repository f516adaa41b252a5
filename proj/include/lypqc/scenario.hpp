#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "constants.hpp"
#include "curve.hpp"
#include "io.hpp"
#include "mapzoo.hpp"
#include "region.hpp"
#include "shapes.hpp"
#include "svg.hpp"
#include "verifier.hpp"

namespace lypqc::scenario {

/// Invalid scenario file; the CLI exits with status 2 and writes nothing.
struct ConfigError : Error {
  using Error::Error;
};

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string type;
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
  std::string source;  // file name for messages

  std::string where(std::size_t line_no) const {
    return source + ":" + std::to_string(line_no) + ": [" + type + (name.empty() ? "" : " " + name) + "]";
  }

  const Entry* find(std::string_view key) const {
    for (auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
  const Entry& require(std::string_view key) const {
    if (auto* e = find(key)) return *e;
    throw ConfigError(where(line) + " missing key '" + std::string(key) + "'");
  }
  std::string text(std::string_view key) const { return require(key).value; }
  std::string text(std::string_view key, std::string fallback) const {
    auto* e = find(key);
    return e ? e->value : fallback;
  }
  double number(std::string_view key) const {
    auto& e = require(key);
    try {
      return io::parse_double(e.value, key);
    } catch (const DataError&) {
      throw ConfigError(where(e.line) + " key '" + std::string(key) + "': not a number '" + e.value + "'");
    }
  }
  double number(std::string_view key, double fallback) const { return find(key) ? number(key) : fallback; }
  std::size_t count(std::string_view key, std::size_t fallback) const {
    if (!find(key)) return fallback;
    double v = number(key);
    if (!(v >= 1) || v != std::floor(v) || v > 1e9)
      throw ConfigError(where(require(key).line) + " key '" + std::string(key) + "': expected a positive integer");
    return static_cast<std::size_t>(v);
  }
  std::vector<double> numbers(std::string_view key) const {
    std::vector<double> out;
    auto& e = require(key);
    for (auto& part : io::split(e.value, ',')) {
      try {
        out.push_back(io::parse_double(part, key));
      } catch (const DataError&) {
        throw ConfigError(where(e.line) + " key '" + std::string(key) + "': not a number list");
      }
    }
    return out;
  }
};

/// `[type name]` sections of `key = value` lines; `#` and `;` start comments.
inline std::vector<Section> parse_sections(std::string_view text, const std::string& source) {
  std::vector<Section> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = io::trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source + ":" + std::to_string(lineno) + ": unterminated section header");
      auto words = io::split(io::trim(std::string_view(line).substr(1, line.size() - 2)), ' ');
      words.erase(std::remove(words.begin(), words.end(), std::string()), words.end());
      if (words.empty() || words.size() > 2)
        throw ConfigError(source + ":" + std::to_string(lineno) + ": expected [type] or [type name]");
      out.push_back({words[0], words.size() == 2 ? words[1] : "", lineno, {}, source});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    if (out.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": key outside any section");
    std::string key = io::trim(std::string_view(line).substr(0, eq));
    if (out.back().find(key)) throw ConfigError(out.back().where(lineno) + " duplicate key '" + key + "'");
    out.back().entries.push_back({key, io::trim(std::string_view(line).substr(eq + 1)), lineno});
  }
  return out;
}

struct RegionEntry {
  PlanarRegion region;
  std::optional<LypRegionSpec> lyp;
  std::optional<ElementaryDomainSpec> elementary;
  io::KeyValues description;
};

struct CurveEntry {
  SampledCurve curve;
  double holder_mu = 0.5;
};

struct CheckEntry {
  std::string name;
  std::string type;
  Section section;
};

struct FigureLayerRef {
  std::string ref;
  std::string color;
  std::string label;
};

struct FigureEntry {
  std::string name;
  std::string file;
  Viewport viewport;
  std::size_t samples = 400;
  std::vector<FigureLayerRef> layers;
  std::vector<std::pair<std::string, std::string>> nest;  // (outer, inner) pairs checked for crossings
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  std::map<std::string, MapHandle> maps;
  std::map<std::string, RegionEntry> regions;
  std::map<std::string, CurveEntry> curves;
  std::vector<CheckEntry> checks;
  std::vector<FigureEntry> figures;
};

namespace detail {

inline BoundaryFunction boundary_from(const Section& s, const std::filesystem::path& base) {
  std::string kind = s.text("boundary");
  if (kind == "homeomorphism") return make_circle_homeomorphism(s.number("amplitude", 0.3));
  if (kind == "circle") {
    double R = s.number("radius", 1.0);
    return BoundaryFunction::from_function([R](double t) { return std::polar(R, t); }, "circle");
  }
  if (kind == "ellipse") {
    double a = s.number("semi_x", 1.0), b = s.number("semi_y", 1.2);
    return BoundaryFunction::from_function([a, b](double t) { return Complex(a * std::cos(t), b * std::sin(t)); },
                                           "ellipse");
  }
  if (kind.rfind("file:", 0) == 0) {
    auto path = base / kind.substr(5);
    if (!std::filesystem::exists(path))
      throw ConfigError(s.where(s.require("boundary").line) + " boundary file not found: " + path.string());
    auto interp = s.text("interpolation", "trigonometric") == "linear" ? BoundaryFunction::Interp::linear
                                                                       : BoundaryFunction::Interp::trigonometric;
    return BoundaryFunction::from_csv(io::read_file(path), interp);
  }
  throw ConfigError(s.where(s.require("boundary").line) + " unknown boundary '" + kind + "'");
}

inline std::vector<std::string> names_list(const Section& s, std::string_view key) {
  auto parts = io::split(s.text(key), ',');
  parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
  if (parts.empty()) throw ConfigError(s.where(s.require(key).line) + " key '" + std::string(key) + "' is empty");
  return parts;
}

class Builder {
 public:
  Builder(std::vector<Section> sections, std::filesystem::path base) : base_(std::move(base)) {
    for (auto& s : sections) {
      if (s.type == "scenario") {
        if (scenario_) throw ConfigError(s.where(s.line) + " duplicate [scenario] section");
        scenario_ = s;
        continue;
      }
      if (s.type != "map" && s.type != "region" && s.type != "curve" && s.type != "check" && s.type != "figure")
        throw ConfigError(s.where(s.line) + " unknown section type '" + s.type + "'");
      if (s.name.empty()) throw ConfigError(s.where(s.line) + " section needs a name");
      auto& bucket = by_type_[s.type];
      if (bucket.count(s.name)) throw ConfigError(s.where(s.line) + " duplicate name '" + s.name + "'");
      bucket.emplace(s.name, s);
      order_.push_back(s);
    }
    if (!scenario_) throw ConfigError("missing [scenario] section");
  }

  Scenario build() {
    Scenario sc;
    sc.name = scenario_->text("name");
    double seed = scenario_->number("seed");
    if (!(seed >= 0) || seed != std::floor(seed) || seed > 9.007199254740992e15)
      throw ConfigError(scenario_->where(scenario_->require("seed").line) + " seed must be a nonnegative integer");
    sc.seed = static_cast<std::uint64_t>(seed);
    sc.output_dir = scenario_->text("output_dir", "out/" + sc.name);
    for (auto& [name, s] : by_type_["map"]) sc.maps.emplace(name, map(name, s.line, s));
    for (auto& [name, s] : by_type_["curve"]) sc.curves.emplace(name, curve(s));
    for (auto& [name, s] : by_type_["region"]) sc.regions.emplace(name, region(name, s.line, s, sc));
    for (auto& s : order_) {
      if (s.type == "check") {
        validate_check(s, sc);
        sc.checks.push_back({s.name, s.text("type"), s});
      } else if (s.type == "figure") {
        sc.figures.push_back(figure(s, sc));
      }
    }
    return sc;
  }

 private:
  template <class Fn>
  auto guarded(const Section& s, Fn&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(s.where(s.line) + " " + e.what());
    }
  }

  const Section& lookup(const std::string& type, const std::string& name, const Section& from, std::string_view key) {
    auto& bucket = by_type_[type];
    auto it = bucket.find(name);
    if (it == bucket.end())
      throw ConfigError(from.where(from.require(key).line) + " key '" + std::string(key) + "': unknown " + type + " '" +
                        name + "'");
    return it->second;
  }

  MapHandle map(const std::string& name, std::size_t, const Section& s) {
    if (auto it = maps_.find(name); it != maps_.end()) return it->second;
    if (building_.count(name)) throw ConfigError(s.where(s.line) + " composition cycle through '" + name + "'");
    building_.insert(name);
    std::string kind = s.text("kind");
    MapHandle m = guarded(s, [&]() -> MapHandle {
      if (kind == "identity") return make_identity();
      if (kind == "plane_identity") return make_plane_identity();
      if (kind == "radial_stretch") return make_radial_stretch(s.number("K"));
      if (kind == "angular_stretch") return make_angular_stretch(make_sine_profile(s.number("amplitude")));
      if (kind == "log_quotient") return make_log_quotient(s.number("radius", 0.2));
      if (kind == "disk_automorphism") return make_disk_automorphism({s.number("a_re"), s.number("a_im", 0.0)});
      if (kind == "A0") return make_A0_map();
      if (kind == "mobius")
        return make_mobius({s.number("a_re"), s.number("a_im", 0)}, {s.number("b_re"), s.number("b_im", 0)},
                           {s.number("c_re"), s.number("c_im", 0)}, {s.number("d_re"), s.number("d_im", 0)},
                           DomainTag::plane, [](Complex) { return std::numeric_limits<double>::infinity(); });
      if (kind == "poisson") return poisson_extend(boundary_from(s, base_), s.count("quadrature", 1024));
      if (kind == "theodorsen")
        return theodorsen_conformal(boundary_from(s, base_), static_cast<int>(s.count("iterations", 200)),
                                    s.number("tol", 1e-10), s.count("nodes", 256))
            .map;
      if (kind == "compose") {
        std::vector<MapHandle> parts;
        for (auto& ref : names_list(s, "maps")) {
          auto& sub = lookup("map", ref, s, "maps");
          parts.push_back(map(ref, sub.line, sub));
        }
        return compose(parts);
      }
      throw ConfigError(s.where(s.require("kind").line) + " unknown map kind '" + kind + "'");
    });
    building_.erase(name);
    maps_.emplace(name, m);
    return m;
  }

  CurveEntry curve(const Section& s) {
    std::string kind = s.text("kind");
    return guarded(s, [&]() -> CurveEntry {
      double holder = s.number("holder_mu", s.number("mu", 0.5));
      if (kind == "circle")
        return {build_circle_curve({s.number("center_re", 0), s.number("center_im", 1)}, s.number("radius", 1.0),
                                   s.count("n", 2000), s.number("start", -pi / 2)),
                holder};
      if (kind == "graph")
        return {build_graph_curve(s.number("c"), s.number("mu"), s.number("x0"), s.count("n", 2001)), holder};
      if (kind == "gamma")
        return {build_gamma_curve(s.number("c"), s.number("mu"), s.number("r0"), s.count("n", 2001)), holder};
      if (kind == "file") {
        auto path = base_ / s.text("path");
        if (!std::filesystem::exists(path))
          throw ConfigError(s.where(s.require("path").line) + " curve file not found: " + path.string());
        return {curve_from_csv(io::read_file(path), s.text("closed", "false") == "true"), holder};
      }
      throw ConfigError(s.where(s.require("kind").line) + " unknown curve kind '" + kind + "'");
    });
  }

  RegionEntry region(const std::string& name, std::size_t, const Section& s, const Scenario& sc) {
    if (auto it = regions_.find(name); it != regions_.end()) return it->second;
    if (building_.count("region:" + name)) throw ConfigError(s.where(s.line) + " region cycle through '" + name + "'");
    building_.insert("region:" + name);
    std::string kind = s.text("kind");
    RegionEntry e = guarded(s, [&]() -> RegionEntry {
      RegionEntry r;
      r.description.set("kind", kind);
      if (kind == "lyp" || kind == "lyp_transform") {
        LypRegionSpec spec;
        if (kind == "lyp") {
          spec = make_lyp_region(s.number("eps"), s.number("c"), s.number("mu"));
        } else {
          spec = transform_region_params(s.number("eps"), s.number("c"), s.number("mu"), s.number("K1"),
                                         s.number("l0"), s.number("c1"));
          r.description.set("K1", s.number("K1"));
          r.description.set("l0", s.number("l0"));
        }
        r.lyp = spec;
        r.region = lyp_region(spec);
        r.description.set("eps", spec.eps);
        r.description.set("c", spec.c);
        r.description.set("mu", spec.mu);
      } else if (kind == "elementary") {
        auto d = build_elementary_domain(s.number("c"), s.number("mu"), s.number("eps"));
        r.elementary = d;
        r.region = elementary_region(d);
        r.description = io::KeyValues::parse(elementary_to_kv(d));
      } else if (kind == "disk") {
        r.region = disk_region({s.number("center_re", 0), s.number("center_im", 0)}, s.number("radius"));
        r.description.set("center_re", s.number("center_re", 0));
        r.description.set("center_im", s.number("center_im", 0));
        r.description.set("radius", s.number("radius"));
      } else if (kind == "upper_half_disk") {
        r.region = upper_half_disk_region(s.number("radius"));
        r.description.set("radius", s.number("radius"));
      } else if (kind == "image") {
        auto mname = s.text("map"), sname = s.text("source");
        auto& msec = lookup("map", mname, s, "map");
        auto& ssec = lookup("region", sname, s, "source");
        auto src = region(sname, ssec.line, ssec, sc);
        r.region = image_region(map(mname, msec.line, msec), src.region, s.count("boundary_samples", 4000));
        r.description.set("map", mname);
        r.description.set("source", sname);
      } else {
        throw ConfigError(s.where(s.require("kind").line) + " unknown region kind '" + kind + "'");
      }
      double scale = s.number("scale", 1.0);
      if (scale != 1.0) {
        r.region = scaled(r.region, scale);
        r.description.set("scale", scale);
      }
      if (s.find("rotation") || s.find("translate_re") || s.find("translate_im")) {
        Isometry iso{s.number("rotation", 0.0), {s.number("translate_re", 0.0), s.number("translate_im", 0.0)}};
        r.region = placed(r.region, iso);
        r.description.set("rotation", iso.rotation);
        r.description.set("translate_re", iso.translation.real());
        r.description.set("translate_im", iso.translation.imag());
      }
      return r;
    });
    building_.erase("region:" + name);
    regions_.emplace(name, e);
    return e;
  }

  void require_ref(const Section& s, const std::string& type, std::string_view key) {
    lookup(type, s.text(key), s, key);
  }

  void validate_check(const Section& s, const Scenario&) {
    std::string type = s.text("type");
    static const std::map<std::string, std::vector<std::pair<std::string, std::string>>> refs = {
        {"inclusion_forward", {{"map", "map"}, {"source", "region"}, {"target", "region"}}},
        {"inclusion_reverse", {{"map", "map"}, {"source", "region"}, {"target", "region"}}},
        {"region_inclusion", {{"inner", "region"}, {"outer", "region"}}},
        {"holder_at_zero", {{"map", "map"}}},
        {"mori", {{"map", "map"}}},
        {"boundary_arg", {{"curve", "curve"}}},
        {"lemma_distance", {}},
        {"colip", {{"map", "map"}}},
        {"dilatation_scan", {{"map", "map"}}},
        {"triple", {{"map", "map"}}},
        {"harnack", {{"map", "map"}}},
    };
    auto it = refs.find(type);
    if (it == refs.end()) throw ConfigError(s.where(s.require("type").line) + " unknown check type '" + type + "'");
    for (auto& [key, kind] : it->second) require_ref(s, kind, key);
    static const std::map<std::string, std::vector<std::string>> numeric = {
        {"holder_at_zero", {"K1", "l0"}}, {"mori", {"K"}},       {"boundary_arg", {"eps"}},
        {"lemma_distance", {"c", "mu"}},   {"colip", {"levels"}}, {"harnack", {"b_re", "normal_re"}},
    };
    if (auto n = numeric.find(type); n != numeric.end())
      for (auto& key : n->second) s.numbers(key);
    if (type == "colip") {
      auto shells = s.text("shells", "boundary_margin");
      if (shells != "boundary_margin" && shells != "upper_radius")
        throw ConfigError(s.where(s.require("shells").line) + " shells must be boundary_margin or upper_radius");
      auto expect = s.text("expect", "flat");
      if (expect != "flat" && expect != "decreasing")
        throw ConfigError(s.where(s.require("expect").line) + " expect must be flat or decreasing");
    }
  }

  FigureEntry figure(const Section& s, const Scenario&) {
    FigureEntry f;
    f.name = s.name;
    f.file = s.text("file", s.name + ".svg");
    auto vp = s.numbers("viewport");
    if (vp.size() != 4) throw ConfigError(s.where(s.require("viewport").line) + " viewport needs xmin,xmax,ymin,ymax");
    f.viewport = {vp[0], vp[1], vp[2], vp[3]};
    if (!f.viewport.nonempty()) throw ConfigError(s.where(s.require("viewport").line) + " viewport is empty");
    f.samples = s.count("samples", 400);
    std::set<std::string> seen;
    for (std::size_t k = 1;; ++k) {
      auto* e = s.find("layer" + std::to_string(k));
      if (!e) break;
      auto parts = io::split(e->value, '|');
      if (parts.size() != 3) throw ConfigError(s.where(e->line) + " layer needs 'ref | color | label'");
      if (!by_type_["region"].count(parts[0]) && !by_type_["curve"].count(parts[0]))
        throw ConfigError(s.where(e->line) + " unknown region or curve '" + parts[0] + "'");
      if (!seen.insert(parts[0]).second) throw ConfigError(s.where(e->line) + " duplicate layer '" + parts[0] + "'");
      f.layers.push_back({parts[0], parts[1], parts[2]});
    }
    if (f.layers.empty()) throw ConfigError(s.where(s.line) + " figure has no layers");
    if (auto* e = s.find("nest")) {
      for (auto& pair : io::split(e->value, ',')) {
        auto ab = io::split(pair, '>');
        if (ab.size() != 2 || !seen.count(ab[0]) || !seen.count(ab[1]))
          throw ConfigError(s.where(e->line) + " nest entries must be 'outer>inner' layer names");
        f.nest.emplace_back(ab[0], ab[1]);
      }
    }
    return f;
  }

  std::filesystem::path base_;
  std::optional<Section> scenario_;
  std::map<std::string, std::map<std::string, Section>> by_type_;
  std::vector<Section> order_;
  std::map<std::string, MapHandle> maps_;
  std::map<std::string, RegionEntry> regions_;
  std::set<std::string> building_;
};

}  // namespace detail

/// Parses and fully validates a scenario; every reference is resolved and every map and
/// region constructed. Throws ConfigError.
inline Scenario parse_scenario(std::string_view text, const std::string& source, const std::filesystem::path& base) {
  return detail::Builder(parse_sections(text, source), base).build();
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("scenario file not found: " + path.string());
  return parse_scenario(io::read_file(path), path.filename().string(), path.parent_path());
}

// ---------------------------------------------------------------------------------------------
// Execution

struct RunOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
};

struct CheckResult {
  std::string name;
  std::string type;
  std::string verdict = "fail";  // pass | fail | error
  double min_margin = std::numeric_limits<double>::quiet_NaN();
  std::size_t samples = 0;
  std::string constants_used;
  std::string error;
  std::string csv;
};

namespace detail {

inline std::vector<Complex> holder_points(DomainTag tag, std::size_t n, CounterRng rng) {
  std::vector<Complex> pts;
  while (pts.size() < n) {
    Complex z = rng.in_disk();
    if (z == Complex(0, 0)) continue;
    if (tag == DomainTag::upper_half_plane && z.imag() <= 0) z = std::conj(z);
    if (z.imag() == 0 && tag == DomainTag::upper_half_plane) continue;
    pts.push_back(z);
  }
  return pts;
}

inline std::string dilatation_csv(const std::vector<DilatationSample>& rows) {
  DilatationScan scan;
  scan.samples = rows;
  return scan.to_csv();
}

inline CheckResult run_check(const Scenario& sc, const CheckEntry& check, std::uint64_t seed,
                             std::optional<std::size_t> samples_override) {
  const Section& s = check.section;
  CheckResult r;
  r.name = check.name;
  r.type = check.type;
  const std::uint64_t cseed = CounterRng(seed).substream("check/" + check.name).seed();
  auto samples = [&](std::size_t fallback) { return samples_override.value_or(s.count("samples", fallback)); };
  auto pass = [&](bool ok) { r.verdict = ok ? "pass" : "fail"; };
  const std::string& t = check.type;

  if (t == "inclusion_forward" || t == "inclusion_reverse" || t == "region_inclusion") {
    InclusionReport rep;
    if (t == "region_inclusion") {
      rep = check_inclusion_forward(make_plane_identity(), sc.regions.at(s.text("inner")).region,
                                    sc.regions.at(s.text("outer")).region, samples(2000), cseed, "region");
    } else if (t == "inclusion_forward") {
      rep = check_inclusion_forward(sc.maps.at(s.text("map")), sc.regions.at(s.text("source")).region,
                                    sc.regions.at(s.text("target")).region, samples(2000), cseed);
    } else {
      rep = check_inclusion_reverse(sc.maps.at(s.text("map")), sc.regions.at(s.text("source")).region,
                                    sc.regions.at(s.text("target")).region, samples(2000), cseed,
                                    s.count("boundary_samples", 20000));
    }
    pass(rep.verdict());
    r.min_margin = rep.min_margin;
    r.samples = rep.samples_tested;
    r.csv = rep.to_csv();
    if (s.find("map")) r.constants_used = "map=" + sc.maps.at(s.text("map")).name();
  } else if (t == "holder_at_zero") {
    const auto& m = sc.maps.at(s.text("map"));
    HolderCheckParams p(s.number("K1"), s.number("l0"),
                        holder_points(m.domain_tag(), samples(2000), CounterRng(cseed).substream("holder")));
    auto rep = check_holder_at_zero(m, p);
    pass(rep.satisfied && rep.stable);
    r.min_margin = rep.l0 - rep.tightest_l0;
    r.samples = rep.samples;
    r.constants_used = "K1=" + io::fmt(p.K1()) + ";alpha=" + io::fmt(p.alpha()) + ";l0=" + io::fmt(p.l0()) +
                       ";tightest_l0=" + io::fmt(rep.tightest_l0);
    io::CsvTable tab{{"re", "im", "ratio"}, {}};
    for (Complex z : p.base_points()) tab.rows.push_back({z.real(), z.imag(), std::abs(m(z)) / std::pow(std::abs(z), p.alpha())});
    r.csv = tab.to_string();
  } else if (t == "mori") {
    const auto& m = sc.maps.at(s.text("map"));
    auto rep = check_mori(m, s.number("K"), samples(10000), CounterRng(cseed).substream("mori"));
    pass(rep.satisfied());
    r.min_margin = rep.bound - rep.max_ratio;
    r.samples = rep.pairs;
    r.constants_used = "K=" + s.text("K") + ";bound=16";
    io::CsvTable tab{{"max_ratio", "bound", "violations", "w1_re", "w1_im", "w2_re", "w2_im"}, {}};
    tab.rows.push_back({rep.max_ratio, rep.bound, static_cast<double>(rep.violations), rep.witness1.real(),
                        rep.witness1.imag(), rep.witness2.real(), rep.witness2.imag()});
    r.csv = tab.to_string();
  } else if (t == "boundary_arg") {
    const auto& ce = sc.curves.at(s.text("curve"));
    double mu = s.number("mu", ce.holder_mu);
    auto rep = s.find("c") ? check_boundary_arg_bound(ce.curve, s.number("c"), mu, s.number("eps"))
                           : check_boundary_arg_bound(ce.curve, mu, s.number("eps"));
    pass(rep.satisfied());
    r.min_margin = rep.worst_margin;
    r.samples = rep.samples_tested;
    r.constants_used = "c=" + io::fmt(rep.c) + ";mu=" + io::fmt(mu);
    if (rep.constants)
      r.constants_used += ";l1=" + io::fmt(rep.constants->l1) + ";b_arc=" + io::fmt(rep.constants->b_arc);
    io::CsvTable tab{{"re", "im", "margin"}, {}};
    for (std::size_t i = 0; i < ce.curve.size(); ++i) {
      Complex w = ce.curve[i];
      double rr = std::abs(w);
      if (!(rr > 1e-12 && rr < rep.eps)) continue;
      double a = std::abs(std::arg(w));
      tab.rows.push_back({w.real(), w.imag(), rep.c * std::pow(rr, mu) - std::min(a, pi - a)});
    }
    r.csv = tab.to_string();
  } else if (t == "lemma_distance") {
    double c = s.number("c"), mu = s.number("mu");
    std::size_t n = samples(50);
    std::size_t grid = s.count("grid", 100000);
    io::CsvTable tab{{"d", "d_prime", "ratio", "x1", "stationarity_residual"}, {}};
    bool ok = true;
    double margin = std::numeric_limits<double>::infinity();
    double C = 0, eps0 = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      double Cc = c * std::pow(solve_eps0(c, mu), 1 + mu);
      double d = Cc * static_cast<double>(k) / static_cast<double>(n);
      auto rep = check_lemma_distance(c, mu, d, grid);
      C = rep.C;
      eps0 = rep.eps0;
      ok = ok && rep.satisfied();
      margin = std::min(margin, 2 * rep.d_prime - d);
      tab.rows.push_back({d, rep.d_prime, d / rep.d_prime, rep.x1, rep.stationarity_residual});
    }
    pass(ok);
    r.min_margin = margin;
    r.samples = n;
    r.constants_used = "eps0=" + io::fmt(eps0) + ";C=" + io::fmt(C);
    r.csv = tab.to_string();
  } else if (t == "colip") {
    const auto& m = sc.maps.at(s.text("map"));
    auto levels = s.numbers("levels");
    std::size_t per = samples(256);
    std::vector<std::vector<Complex>> shells;
    bool margin_mode = s.text("shells", "boundary_margin") == "boundary_margin";
    for (double lv : levels) shells.push_back(margin_mode ? circle_points(1 - lv, per) : upper_semicircle(lv, per));
    auto tr = colip_trend(m, levels, shells);
    pass(trend_name(tr.trend) == s.text("expect", "flat"));
    r.min_margin = tr.shells.back().min_lambda;
    r.samples = per * levels.size();
    r.constants_used = std::string("trend=") + trend_name(tr.trend);
    io::CsvTable tab{{"level", "min_lambda", "argmin_re", "argmin_im", "boundary_margin"}, {}};
    for (std::size_t k = 0; k < levels.size(); ++k)
      tab.rows.push_back({levels[k], tr.shells[k].min_lambda, tr.shells[k].argmin.real(), tr.shells[k].argmin.imag(),
                          tr.shells[k].boundary_margin});
    r.csv = tab.to_string();
  } else if (t == "dilatation_scan") {
    const auto& m = sc.maps.at(s.text("map"));
    std::size_t nr = s.count("rings", 20), nt = s.count("angles", 50);
    auto grid = disk_polar_grid(nr, nt, s.number("radius", 0.95));
    if (m.domain_tag() == DomainTag::upper_half_plane)
      for (auto& z : grid) z = Complex(z.real(), std::abs(z.imag()) + 1e-3);
    auto scan = dilatation_scan(m, grid);
    double limit = m.declared_K() ? *m.declared_K() * (1 + 5e-3) : std::numeric_limits<double>::infinity();
    pass(scan.degenerate.empty() && scan.max_D <= limit);
    r.min_margin = scan.min_lambda;
    r.samples = grid.size();
    r.constants_used = "max_D=" + io::fmt(scan.max_D) +
                       (m.declared_K() ? ";declared_K=" + io::fmt(*m.declared_K()) : std::string());
    r.csv = scan.to_csv();
  } else if (t == "triple") {
    const auto& m = sc.maps.at(s.text("map"));
    TripleConfig cfg;
    cfg.mu = s.number("mu", cfg.mu);
    cfg.c = s.number("c", 0.0);
    cfg.eps_outer = s.number("eps_outer", cfg.eps_outer);
    cfg.eps_mid = s.number("eps_mid", cfg.eps_mid);
    cfg.eps_inner = s.number("eps_inner", cfg.eps_inner);
    cfg.inner_c_factor = s.number("inner_c_factor", cfg.inner_c_factor);
    cfg.inner_scale = s.number("inner_scale", cfg.inner_scale);
    cfg.boundary_samples = s.count("boundary_samples", cfg.boundary_samples);
    std::size_t n = samples(500);
    auto reps = check_triple(unit_circle_points(s.count("points", 8)), make_triple_factory(m, cfg), n, cseed);
    bool ok = true;
    double margin = std::numeric_limits<double>::infinity();
    std::string csv = "a_re,a_im,b_re,b_im,which,re,im,margin,inside\n";
    for (auto& rep : reps) {
      ok = ok && rep.verdict();
      margin = std::min(margin, rep.min_margin());
      r.samples += rep.inner_in_outer.samples_tested + rep.inner_in_mid.samples_tested + rep.mid_in_outer.samples_tested;
      std::string prefix = io::fmt(rep.a.real()) + "," + io::fmt(rep.a.imag()) + "," + io::fmt(rep.b.real()) + "," +
                           io::fmt(rep.b.imag()) + ",";
      for (auto* part : {&rep.inner_in_outer, &rep.inner_in_mid, &rep.mid_in_outer})
        for (auto& row : part->rows)
          csv += prefix + row.which + "," + io::fmt(row.point.real()) + "," + io::fmt(row.point.imag()) + "," +
                 io::fmt(row.margin) + "," + (row.margin > 0 ? "1" : "0") + "\n";
    }
    pass(ok);
    r.min_margin = margin;
    r.constants_used = "c=" + io::fmt(cfg.c == 0.0 ? unit_circle_l2(cfg.mu) : cfg.c) + ";mu=" + io::fmt(cfg.mu);
    r.csv = csv;
  } else if (t == "harnack") {
    const auto& m = sc.maps.at(s.text("map"));
    Complex b{s.number("b_re"), s.number("b_im", 0.0)};
    Complex n{s.number("normal_re"), s.number("normal_im", 0.0)};
    std::vector<Complex> bimg;
    for (Complex a : unit_circle_points(s.count("boundary_samples", 1024))) bimg.push_back(boundary_value(m, a));
    double R0 = s.find("R0") ? s.number("R0") : estimate_R0(m(0.0), bimg);
    auto grid = disk_polar_grid(s.count("rings", 20), s.count("angles", 50), s.number("radius", 0.95));
    try {
      auto rep = check_harnack_lower(m, b, n, R0, grid, bimg);
      pass(rep.satisfied());
      r.min_margin = rep.min_ratio - 1;
      r.samples = rep.samples;
      io::CsvTable tab{{"re", "im", "u", "bound"}, {}};
      for (Complex z : grid) tab.rows.push_back({z.real(), z.imag(), dot(m(z) - b, n / std::abs(n)), (1 - std::abs(z)) * R0 / 2});
      r.csv = tab.to_string();
    } catch (const PreconditionError& e) {
      r.verdict = "fail";
      r.error = std::string("precondition: ") + e.what();
      r.csv = "witness_re,witness_im\n" + io::fmt(e.witness.real()) + "," + io::fmt(e.witness.imag()) + "\n";
    }
    r.constants_used = "R0=" + io::fmt(R0);
  }
  return r;
}

inline std::vector<Complex> layer_ring(const Scenario& sc, const std::string& ref, std::size_t samples) {
  if (auto it = sc.regions.find(ref); it != sc.regions.end()) return it->second.region.boundary(samples);
  auto pts = sc.curves.at(ref).curve.points();
  return {pts.begin(), pts.end()};
}

struct FigureResult {
  std::string svg;
  std::size_t crossings = 0;
  std::string error;
};

inline FigureResult run_figure(const Scenario& sc, const FigureEntry& f) {
  FigureResult out;
  FigureSpec spec;
  spec.viewport = f.viewport;
  spec.samples_per_curve = f.samples;
  for (auto& l : f.layers) spec.layers.push_back({l.ref, layer_ring(sc, l.ref, f.samples), l.color, l.label});
  out.svg = render_svg(spec);
  for (auto& [a, b] : f.nest) {
    auto ra = layer_ring(sc, a, f.samples), rb = layer_ring(sc, b, f.samples);
    std::function<bool(Complex)> inside;
    if (auto it = sc.regions.find(a); it != sc.regions.end()) {
      const auto& outer = it->second.region;
      inside = [&outer](Complex w) { return outer.margin(w) >= -1e-9; };
    }
    out.crossings += count_crossings(ra, rb, 0.05, inside);
  }
  return out;
}

}  // namespace detail

enum class Verb { construct, measure, verify, render };

/// Runs one verb over a scenario file. Returns 0 (all verdicts pass), 1 (a verdict failed or
/// a check raised), or 2 (configuration error; nothing written).
inline int run(const std::filesystem::path& scenario_path, Verb verb, const RunOptions& opt, std::ostream& log) {
  Scenario sc;
  try {
    sc = load_scenario(scenario_path);
  } catch (const Error& e) {
    log << "configuration error: " << e.what() << "\n";
    return 2;
  }
  const std::uint64_t seed = opt.seed.value_or(sc.seed);
  const std::filesystem::path out = opt.out.value_or(sc.output_dir);

  if (verb == Verb::construct) {
    for (auto& [name, r] : sc.regions) {
      io::write_file_atomic(out / (name + ".region"), r.description.to_string());
      io::CsvTable t{{"re", "im"}, {}};
      for (Complex p : r.region.boundary(opt.samples.value_or(600))) t.rows.push_back({p.real(), p.imag()});
      io::write_file_atomic(out / (name + ".csv"), t.to_string());
    }
    for (auto& [name, c] : sc.curves) io::write_file_atomic(out / (name + ".csv"), curve_to_csv(c.curve));
    log << "constructed " << sc.regions.size() << " regions and " << sc.curves.size() << " curves in " << out.string()
        << "\n";
    return 0;
  }
  if (verb == Verb::measure) {
    std::string text;
    for (auto& [name, c] : sc.curves) {
      auto e = estimate_constants(c.curve, c.holder_mu);
      io::KeyValues kv;
      kv.set("l1", e.l1);
      kv.set("b_arc", e.b_arc);
      kv.set("l2", e.l2);
      kv.set("mu", e.mu);
      kv.set("samples", static_cast<double>(e.samples));
      text += "[curve " + name + "]\n" + kv.to_string();
      log << name << ": l1=" << io::fmt(e.l1) << " b=" << io::fmt(e.b_arc) << " l2=" << io::fmt(e.l2) << "\n";
    }
    io::write_file_atomic(out / "constants.txt", text);
    return 0;
  }

  bool all_pass = true;
  std::string body;
  std::size_t failed = 0, total = 0;
  if (verb == Verb::verify) {
    for (auto& check : sc.checks) {
      CheckResult r;
      try {
        r = detail::run_check(sc, check, seed, opt.samples);
      } catch (const std::exception& e) {
        r.name = check.name;
        r.type = check.type;
        r.verdict = "error";
        r.error = std::string("check ") + check.name + " (" + check.type + "): " + e.what();
      }
      ++total;
      if (r.verdict != "pass") {
        all_pass = false;
        ++failed;
      }
      if (!r.csv.empty()) io::write_file_atomic(out / (check.name + ".csv"), r.csv);
      io::KeyValues kv;
      kv.set("type", r.type);
      kv.set("verdict", r.verdict);
      kv.set("min_margin", r.min_margin);
      kv.set("samples", static_cast<double>(r.samples));
      kv.set("constants_used", r.constants_used);
      kv.set("evidence", std::string("sampled verification"));
      if (!r.error.empty()) kv.set("error", r.error);
      body += "[check " + check.name + "]\n" + kv.to_string();
      log << check.name << ": " << r.verdict << (r.error.empty() ? "" : " (" + r.error + ")") << "\n";
    }
  }
  for (auto& f : sc.figures) {
    io::KeyValues kv;
    ++total;
    try {
      auto fr = detail::run_figure(sc, f);
      io::write_file_atomic(out / f.file, fr.svg);
      kv.set("file", f.file);
      kv.set("crossings", static_cast<double>(fr.crossings));
      kv.set("verdict", std::string(fr.crossings == 0 ? "pass" : "fail"));
      if (fr.crossings) {
        all_pass = false;
        ++failed;
      }
      log << "figure " << f.name << ": " << f.file << " crossings=" << fr.crossings << "\n";
    } catch (const std::exception& e) {
      kv.set("verdict", std::string("error"));
      kv.set("error", std::string(e.what()));
      all_pass = false;
      ++failed;
      log << "figure " << f.name << ": error (" << e.what() << ")\n";
    }
    body += "[figure " + f.name + "]\n" + kv.to_string();
  }
  io::KeyValues head;
  head.set("scenario", sc.name);
  head.set("seed", std::to_string(seed));
  head.set("verdict", std::string(all_pass ? "pass" : "fail"));
  head.set("items", static_cast<double>(total));
  head.set("failed", static_cast<double>(failed));
  io::write_file_atomic(out / "summary.txt", head.to_string() + body);
  return all_pass ? 0 : 1;
}

}  // namespace lypqc::scenario

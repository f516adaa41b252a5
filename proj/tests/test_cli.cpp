#include <catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "lypqc/lypqc.hpp"
#include "lypqc/scenario.hpp"

using namespace lypqc;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

const fs::path scenarios = LYPQC_SCENARIO_DIR;

fs::path fresh_dir(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("lypqc_cli_" + tag);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = io::read_file(e.path());
  return out;
}

std::string config_error_of(const std::string& text) {
  try {
    scenario::parse_scenario(text, "t.ini", ".");
  } catch (const scenario::ConfigError& e) {
    return e.what();
  }
  return "";
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("parse errors carry line numbers") {
  CHECK_THAT(config_error_of("[scenario]\nname = x\nseed = 1\nthis line has no equals\n"), ContainsSubstring("t.ini:4"));
  CHECK_THAT(config_error_of("[scenario\n"), ContainsSubstring("t.ini:1"));
  CHECK_THAT(config_error_of("key = 1\n"), ContainsSubstring("outside any section"));
  CHECK_THAT(config_error_of("[scenario]\nname = x\nseed = 1\n\n[map h]\nkind = radial_stretch\nK = abc\n"),
             ContainsSubstring("t.ini:7"));
  CHECK_THAT(config_error_of("[scenario]\nname = x\nname = y\n"), ContainsSubstring("duplicate key"));
  CHECK_THAT(config_error_of("[scenario]\nname = x\nseed = -1\n"), ContainsSubstring("seed"));
  CHECK_THAT(config_error_of("[scenario]\nname = x\nseed = 1\n[widget w]\n"), ContainsSubstring("unknown section type"));
  CHECK_THAT(config_error_of("[scenario]\nname = x\nseed = 1\n[map h]\nkind = teapot\n"),
             ContainsSubstring("unknown map kind"));
  CHECK_THAT(config_error_of("[scenario]\nname = x\nseed = 1\n[map a]\nkind = compose\nmaps = b\n[map b]\nkind = "
                             "compose\nmaps = a\n"),
             ContainsSubstring("cycle"));
  CHECK(config_error_of("[scenario]\nname = x\nseed = 1\n# comment\n; another\n").empty());
}

TEST_CASE("unknown references exit 2 and write nothing") {
  auto out = fresh_dir("malformed");
  std::ostringstream log;
  scenario::RunOptions opt;
  opt.out = out;
  CHECK(scenario::run(scenarios / "malformed_unknown_region.ini", scenario::Verb::verify, opt, log) == 2);
  CHECK_THAT(log.str(), ContainsSubstring("H0"));
  CHECK_THAT(log.str(), ContainsSubstring("malformed_unknown_region.ini:"));
  CHECK_FALSE(fs::exists(out));
  CHECK(scenario::run(scenarios / "no_such_file.ini", scenario::Verb::verify, opt, log) == 2);
}

TEST_CASE("construct writes region descriptions that round trip") {
  auto out = fresh_dir("construct");
  std::ostringstream log;
  scenario::RunOptions opt;
  opt.out = out;
  REQUIRE(scenario::run(scenarios / "radial_chain.ini", scenario::Verb::construct, opt, log) == 0);
  auto d0 = region_from_kv(io::read_file(out / "D0.region"));
  CHECK(d0.eps == 0.5);
  CHECK(d0.c == 1);
  CHECK(d0.mu == 0.5);
  auto h0 = region_from_kv(io::read_file(out / "H0.region"));
  auto expect = transform_region_params(0.5, 1, 0.5, 2, 1, 1);
  CHECK(h0.eps == expect.eps);
  CHECK(h0.mu == expect.mu);
  CHECK(h0.c == expect.c);
  auto ring = io::parse_csv(io::read_file(out / "D0.csv"), {"re", "im"});
  CHECK(ring.rows.size() == 600);
  for (auto& row : ring.rows) CHECK(std::abs(region_margin(d0, {row[0], row[1]})) < 1e-9);
}

TEST_CASE("verify is byte-identical across runs") {
  for (const char* name : {"identity_pass", "radial_chain", "shrunken_target"}) {
    auto a = fresh_dir(std::string(name) + "_a"), b = fresh_dir(std::string(name) + "_b");
    std::ostringstream la, lb;
    scenario::RunOptions oa, ob;
    oa.out = a;
    ob.out = b;
    int ra = scenario::run(scenarios / (std::string(name) + ".ini"), scenario::Verb::verify, oa, la);
    int rb = scenario::run(scenarios / (std::string(name) + ".ini"), scenario::Verb::verify, ob, lb);
    CHECK(ra == rb);
    auto ta = read_tree(a), tb = read_tree(b);
    REQUIRE(ta.count("summary.txt") == 1);
    CHECK(ta == tb);
  }
}

TEST_CASE("verdicts and overrides") {
  std::ostringstream log;
  scenario::RunOptions opt;
  opt.out = fresh_dir("shrunken");
  CHECK(scenario::run(scenarios / "shrunken_target.ini", scenario::Verb::verify, opt, log) == 1);
  auto summary = io::read_file(*opt.out / "summary.txt");
  CHECK_THAT(summary, ContainsSubstring("verdict=fail"));

  opt.out = fresh_dir("identity_seed");
  opt.seed = 1234;
  CHECK(scenario::run(scenarios / "identity_pass.ini", scenario::Verb::verify, opt, log) == 0);
  CHECK_THAT(io::read_file(*opt.out / "summary.txt"), ContainsSubstring("seed=1234"));
}

TEST_CASE("single-layer SVG") {
  FigureSpec spec;
  spec.layers.push_back({"c", circle_points(0.5, 64), "#000000", "circle"});
  auto svg = render_svg(spec);
  CHECK(count_of(svg, "<path") == 1);
  CHECK(count_of(svg, " L ") == 63);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg == render_svg(spec));

  spec.viewport = {2, 3, 2, 3};
  CHECK_THROWS_AS(render_svg(spec), RenderError);
  spec.viewport = {1, 1, 0, 1};
  CHECK_THROWS_AS(render_svg(spec), RenderError);
  spec.viewport = {};
  spec.layers.push_back(spec.layers.front());
  CHECK_THROWS_AS(render_svg(spec), RenderError);
}

TEST_CASE("crossing counts") {
  auto outer = circle_points(1.0, 200), inner = circle_points(0.5, 200);
  CHECK(count_crossings(outer, inner) == 0);

  std::vector<Complex> shifted;
  for (Complex p : inner) shifted.push_back(p + Complex(0.8, 0));
  CHECK(count_crossings(outer, shifted) == 2);

  // the same circle sampled at two different rates interleaves only by chord sag
  CHECK(count_crossings(circle_points(1.0, 300), circle_points(1.0, 777)) == 0);
  CHECK(count_crossings(circle_points(1.0, 300), circle_points(1.0, 777), 0.0) > 0);

  auto disk = disk_region(0, 1);
  auto touching = [&disk](Complex w) { return disk.margin(w) >= -1e-9; };
  // an inner circle tangent from inside cuts the outer chords near the contact point
  std::vector<Complex> tangent;
  for (Complex p : circle_points(0.5, 400)) tangent.push_back(p + Complex(0.5, 0));
  CHECK(count_crossings(outer, tangent, 0.0, touching) == 0);
}

#include <iostream>

#include "CLI11.hpp"
#include "lypqc/scenario.hpp"

namespace sc = lypqc::scenario;

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov-domain quasiconformal toolkit"};
  app.require_subcommand(1, 1);

  std::string scenario_path;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t samples = 0;

  struct VerbSpec {
    const char* name;
    const char* help;
    sc::Verb verb;
  };
  const VerbSpec verbs[] = {
      {"construct", "write region and curve boundaries as CSV", sc::Verb::construct},
      {"measure", "estimate l1, arc-chord constant and l2 for every curve", sc::Verb::measure},
      {"verify", "run every check and figure, write CSVs and summary.txt", sc::Verb::verify},
      {"render", "render the scenario's figures as SVG", sc::Verb::render},
  };
  sc::Verb chosen = sc::Verb::verify;
  for (auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    sub->add_option("--scenario", scenario_path, "scenario file")->required();
    sub->add_option("--out", out, "output directory (overrides the scenario's output_dir)");
    sub->add_option("--seed", seed, "sampling seed (overrides the scenario's seed)");
    sub->add_option("--samples", samples, "sample count for every check")->check(CLI::PositiveNumber);
    sub->callback([&chosen, verb = v.verb] { chosen = verb; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  sc::RunOptions opt;
  auto* sub = app.get_subcommands().front();
  if (sub->count("--out")) opt.out = out;
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--samples")) opt.samples = samples;
  try {
    return sc::run(scenario_path, chosen, opt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

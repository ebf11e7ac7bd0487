// Command line front end. Subcommands share one configuration model: a
// config file (key = value text or a flat JSON object) or a named preset
// supplies the experiment, and the common flags override levels, seed and
// output prefix. Exit codes: 0 all checks pass, 1 unreadable configuration,
// 2 a check reported a non-finite or failed invariant, 3 parameters outside
// a theorem's admissible range.
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "choquet/config.hpp"
#include "choquet/runner.hpp"

namespace {

struct CommonFlags {
  std::string preset;
  std::string config_path;
  int level = 0;
  bool refine = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool quiet = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--preset", flags.preset, "named preset to run");
  cmd->add_option("--config", flags.config_path, "configuration file (key = value text or JSON)");
  cmd->add_option("--level", flags.level, "dyadic refinement level of the grid");
  cmd->add_flag("--refine", flags.refine, "re-run one level finer and report the stability factor");
  cmd->add_option("--seed", flags.seed, "seed for the random function families")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--out", flags.out, "output prefix for the .csv/.json/.dat reports");
  cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
}

choquet::ExperimentConfig build_config(choquet::Command command, const CommonFlags& flags) {
  choquet::ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = choquet::parse_config_file(flags.config_path);
  cfg.command = command;
  if (!flags.preset.empty()) cfg.preset = flags.preset;
  if (flags.level > 0) {
    cfg.level = flags.level;
    cfg.level_set = true;
  }
  if (flags.refine) cfg.refine_flag = true;
  if (flags.seed_set) cfg.seed = flags.seed;
  if (!flags.out.empty()) cfg.out = flags.out;
  if (flags.quiet) cfg.quiet = true;
  return cfg;
}

// --sets accepts either a plain count or the form random:count.
int parse_sets(const std::string& raw) {
  std::string text = raw;
  if (text.rfind("random:", 0) == 0) text = text.substr(7);
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw choquet::ConfigError("config field 'sets': expected a positive count, got '" + raw + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for dyadic Hausdorff content and Choquet-integral inequalities"};
  app.require_subcommand(1);

  struct SubSpec {
    choquet::Command command;
    CLI::App* cmd;
    CommonFlags flags;
  };
  std::vector<std::unique_ptr<SubSpec>> subs;
  auto add_sub = [&](choquet::Command command, const char* name, const char* help) {
    auto spec = std::make_unique<SubSpec>();
    spec->command = command;
    spec->cmd = app.add_subcommand(name, help);
    add_common_flags(spec->cmd, spec->flags);
    subs.push_back(std::move(spec));
    return subs.back().get();
  };

  add_sub(choquet::Command::Content, "content", "dyadic Hausdorff content of a rasterized domain");
  add_sub(choquet::Command::Integrate, "integrate",
          "Choquet integral of a test function power against the content");
  add_sub(choquet::Command::Maximal, "maximal",
          "sup of the fractional maximal function against the sup of the function");
  add_sub(choquet::Command::Check, "check", "evaluate an inequality check or a named preset bundle");
  add_sub(choquet::Command::Sweep, "sweep",
          "sweep a function family parameter and estimate the best constant");
  SubSpec* axioms = add_sub(choquet::Command::Axioms, "axioms",
                            "content and integral axiom suites on random sets");

  double axioms_delta = 1.5;
  std::string axioms_sets;
  axioms->cmd->add_option("--delta", axioms_delta, "content dimension exponent");
  axioms->cmd->add_option("--sets", axioms_sets, "number of random sets, e.g. 500 or random:500");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& spec : subs) {
      if (!spec->cmd->parsed()) continue;
      choquet::ExperimentConfig cfg = build_config(spec->command, spec->flags);
      if (spec->command == choquet::Command::Axioms) {
        if (axioms->cmd->count("--delta") > 0) cfg.delta = axioms_delta;
        if (!axioms_sets.empty()) cfg.sets = parse_sets(axioms_sets);
      }
      return choquet::run_and_write(cfg);
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
  } catch (const choquet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

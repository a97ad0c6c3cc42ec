// Command-line driver for the channel-flow island laboratory.
//
// Subcommands mirror the experiment kinds: solve, expand, sweep, genericity,
// appendix-a, fixed-point, oracle. Each reads a sectioned config file and
// writes deterministic CSV/JSON/SVG artifacts into --out.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "islandlab/config.hpp"
#include "islandlab/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  long long seed = -1;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config_path, "configuration file");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "random seed (overrides the config)");
  cmd->add_option("--jobs", args.jobs, "parallel sweep jobs")->check(CLI::Range(1, 64));
}

int run(const CommonArgs& args, islandlab::ExperimentKind kind) {
  islandlab::ExperimentConfig cfg = islandlab::load_config(args.config_path);
  cfg.kind = kind;
  if (args.seed >= 0) cfg.seed = static_cast<unsigned long long>(args.seed);
  return islandlab::run_experiment(cfg, args.out_dir, args.jobs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"islandlab: steady channel flows, boundary perturbations and island topology"};
  app.require_subcommand(1);

  CommonArgs args;
  using islandlab::ExperimentKind;
  struct Sub {
    const char* name;
    const char* help;
    ExperimentKind kind;
  };
  const Sub subs[] = {
      {"solve", "solve one steady state and emit the field, log and plot", ExperimentKind::Solve},
      {"expand", "first-order correction, remainder and trace", ExperimentKind::Expand},
      {"sweep", "epsilon sweep with remainder and island-height scaling fits",
       ExperimentKind::Sweep},
      {"genericity", "random boundary perturbations: classes, traces, islands",
       ExperimentKind::Genericity},
      {"appendix-a", "definite island criteria (flat bottom, flat-flat, two-stagnation, "
                     "free-boundary diagnostic)",
       ExperimentKind::AppendixA},
      {"fixed-point", "Picard iteration for the remainder with contraction diagnostics",
       ExperimentKind::FixedPoint},
      {"oracle", "closed-form reference values for the configured shape",
       ExperimentKind::Oracle},
  };
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    add_common(cmd, args);
    const ExperimentKind kind = sub.kind;
    cmd->callback([&args, kind]() {
      const int rc = run(args, kind);
      if (rc != 0) throw CLI::RuntimeError(rc);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}

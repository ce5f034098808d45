// gustcast: short-term wind power forecasting front end.
//
//   gustcast synth    --seed 7 --points 1152 --out data/
//   gustcast train    --config run.conf [--set key=value ...]
//   gustcast hyperopt --config run.conf
//   gustcast eval     --checkpoint out/replicate_0.ckpt --data data/ [--range 0:288]

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gustcast/commands.hpp"
#include "gustcast/error.hpp"

namespace {

using namespace gustcast;

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
  std::vector<std::string> overrides;
};

RunConfig build_config(const GlobalFlags& g, bool require_file) {
  RunConfig cfg;
  if (!g.config.empty()) cfg = load_run_config(g.config);
  else if (require_file) throw Error(Errc::config_error, "--config is required");
  for (const auto& o : g.overrides) apply_override(cfg, o);
  if (g.seed) cfg.train.seed = *g.seed;
  if (!g.out.empty()) cfg.out_dir = g.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gustcast: LSTM-family wind power forecasting"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "Run configuration file (key = value)");
  app.add_option("--seed", g.seed, "Seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory (overrides the config)");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");
  app.add_option("--set", g.overrides, "Override a config key, e.g. --set learning_rate=0.01");

  auto* synth = app.add_subcommand("synth", "Write a synthetic power/forecast pair");
  std::size_t points = 0;
  double capacity = 16.0;
  synth->add_option("--points", points, "Number of 5-minute power rows (multiple of 12)")->required();
  synth->add_option("--capacity", capacity, "Farm capacity in MW");

  auto* train = app.add_subcommand("train", "Train replicates and evaluate against persistence");
  auto* hyperopt = app.add_subcommand("hyperopt", "Genetic hyperparameter search");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint and export step-plot data");
  std::string checkpoint, data_dir, range;
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval->add_option("--data", data_dir, "Directory with power.csv and weather.csv")->required();
  eval->add_option("--range", range, "Offsets B:E inside the test view");
  std::optional<double> eval_capacity;
  eval->add_option("--capacity", eval_capacity, "Farm capacity in MW (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CommandContext ctx;
  if (!g.quiet) ctx.log = &std::cerr;

  try {
    if (*synth) {
      if (g.out.empty()) throw Error(Errc::config_error, "synth: --out is required");
      cmd_synth(g.seed.value_or(0), points, capacity, g.out, ctx);
    } else if (*train) {
      cmd_train(build_config(g, true), ctx);
    } else if (*hyperopt) {
      cmd_hyperopt(build_config(g, true), ctx);
    } else if (*eval) {
      EvalOptions opt;
      opt.base = build_config(g, false);
      if (eval_capacity) opt.base.capacity_mw = *eval_capacity;
      opt.checkpoint = checkpoint;
      opt.data_dir = data_dir;
      if (!range.empty()) opt.range = parse_range(range);
      cmd_eval(opt, ctx);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

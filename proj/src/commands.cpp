#include "gustcast/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "gustcast/checkpoint.hpp"
#include "gustcast/error.hpp"
#include "gustcast/hyperopt.hpp"
#include "gustcast/metrics.hpp"

namespace gustcast {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + p.string());
  return os;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
}

void note(const CommandContext& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << msg << '\n' << std::flush;
}

ModelData prepare_for(const RunConfig& cfg, const AlignedDataset& ds) {
  return prepare(ds, cfg.feature_mode(), split(ds.size(), cfg.train_frac, cfg.test_len));
}

double mean_or_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    if (std::isinf(x)) return std::numeric_limits<double>::infinity();
    s += x;
  }
  return s / static_cast<double>(v.size());
}

}  // namespace

int exit_code_for(const Error& e) noexcept {
  return e.code() == Errc::config_error ? kExitUsage : kExitRuntime;
}

AlignedDataset load_dataset(const RunConfig& cfg) {
  if (cfg.power_csv && cfg.weather_csv) {
    return align(load_power_csv(*cfg.power_csv, cfg.capacity_mw), load_weather_csv(*cfg.weather_csv));
  }
  if (cfg.synth_points > 0) {
    SynthOptions opt;
    opt.capacity_mw = cfg.capacity_mw;
    const auto s = synth_generate(cfg.synth_seed, cfg.synth_points, opt);
    return align(s.power, s.weather);
  }
  throw Error(Errc::config_error, "no data source: set data.power/data.weather or synth.points");
}

void cmd_synth(std::uint64_t seed, std::size_t points, double capacity_mw,
               const std::filesystem::path& out_dir, const CommandContext& ctx) {
  if (points == 0 || points % kStepsPerHour != 0)
    throw Error(Errc::config_error, "--points must be a positive multiple of 12");
  SynthOptions opt;
  opt.capacity_mw = capacity_mw;
  const auto s = synth_generate(seed, points, opt);
  ensure_dir(out_dir);
  {
    auto os = open_out(out_dir / "power.csv");
    write_power_csv(os, s.power);
  }
  {
    auto os = open_out(out_dir / "weather.csv");
    write_weather_csv(os, s.weather);
  }
  note(ctx, "wrote " + std::to_string(s.power.size()) + " power rows and " +
                std::to_string(s.weather.size()) + " forecast hours to " + out_dir.string());
}

void cmd_train(const RunConfig& cfg, const CommandContext& ctx) {
  const VariantConfig variant = cfg.variant();
  const auto ds = load_dataset(cfg);
  const ModelData md = prepare_for(cfg, ds);
  ensure_dir(cfg.out_dir);
  const std::string name = cfg.model_name();
  note(ctx, "training " + name + " on " + std::to_string(md.split.train_end) + " rows, " +
                std::to_string(cfg.train.replicates) + " replicate(s) x " +
                std::to_string(cfg.train.epochs) + " iterations");

  std::vector<ReplicateRun> runs;
  EvalReport persistence;
  std::optional<ReplicateStats> nmae_stats;
  if (cfg.train.replicates >= 2) {
    auto res = run_replicates(cfg.train, md, variant);
    runs = std::move(res.runs);
    persistence = res.persistence;
    nmae_stats = res.nmae;
  } else {
    ReplicateRun run;
    run.seed = cfg.train.seed;
    run.model = make_model(variant, run.seed);
    run.history = train_hybrid(run.model, md, cfg.train);
    run.test = evaluate_model(run.model, md, md.split.test_begin, md.split.rows, cfg.train.eval_warmup);
    runs.push_back(std::move(run));
    persistence = evaluate_persistence(md, md.split.test_begin, md.split.rows);
  }

  std::vector<EvalRow> rows;
  Vector nmae, nr, mae_mw;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& run = runs[k];
    save_checkpoint(run.model.cfg, run.model.params,
                    cfg.out_dir / ("replicate_" + std::to_string(k) + ".ckpt"));
    auto hs = open_out(cfg.out_dir / ("history_" + std::to_string(k) + ".csv"));
    write_history_csv(hs, run.history);
    nmae.push_back(run.test.nmae);
    nr.push_back(run.test.naive_ratio);
    mae_mw.push_back(run.test.mae);
    note(ctx, "  replicate " + std::to_string(k) + ": test NMAE " + format_double(run.test.nmae) +
                  "%, naive ratio " + format_double(run.test.naive_ratio));
  }

  EvalRow summary;
  summary.model = name;
  summary.nmae_pct = nmae_stats ? nmae_stats->mean : nmae.front();
  summary.has_moe = nmae_stats.has_value();
  summary.moe95_pct = nmae_stats ? nmae_stats->moe95 : 0.0;
  summary.naive_ratio = mean_or_inf(nr);
  summary.mae_mw = mean_or_inf(mae_mw);
  summary.n_points = runs.front().test.n_points;
  rows.push_back(summary);
  if (runs.size() > 1) {
    for (std::size_t k = 0; k < runs.size(); ++k)
      rows.push_back(to_row(name + "#" + std::to_string(k), runs[k].test));
  }
  rows.push_back(to_row("persistence", persistence));

  auto es = open_out(cfg.out_dir / "eval.csv");
  write_eval_csv(es, rows);
  note(ctx, "persistence NMAE " + format_double(persistence.nmae) + "%; results in " +
                cfg.out_dir.string());
}

void cmd_hyperopt(const RunConfig& cfg, const CommandContext& ctx) {
  const VariantConfig variant = cfg.variant();
  const auto ds = load_dataset(cfg);
  const ModelData md = prepare_for(cfg, ds);
  ensure_dir(cfg.out_dir);

  GAConfig ga = cfg.ga;
  ga.seed = cfg.train.seed;
  std::size_t done = 0;
  const FitnessFn fitness = [&](const Genome& g, std::uint64_t seed) {
    const double f = evaluate_genome(g, variant, md, ga.partial_epochs, seed, cfg.train.eval_warmup);
    note(ctx, "  eval " + std::to_string(++done) + ": lr=" + format_double(g.learning_rate) +
                  " cell_dim=" + std::to_string(g.cell_dim) + " block_len=" +
                  std::to_string(g.block_len) + " -> " + format_double(f));
    return f;
  };
  const auto res = run_ga(ga, fitness);

  {
    auto os = open_out(cfg.out_dir / "best_genome.conf");
    os << "# best validation NMAE " << format_double(res.best_fitness) << "% for "
       << cfg.model_name() << "\n"
       << genome_fragment(res.best);
  }
  auto ls = open_out(cfg.out_dir / "generations.csv");
  write_generation_csv(ls, res.log);
  note(ctx, "best genome: " + genome_fragment(res.best));
}

std::pair<std::size_t, std::size_t> parse_range(std::string_view text) {
  const auto colon = text.find(':');
  std::size_t a = 0, b = 0;
  auto num = [](std::string_view s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && !s.empty();
  };
  if (colon == text.npos || !num(text.substr(0, colon), a) || !num(text.substr(colon + 1), b) ||
      b <= a) {
    throw Error(Errc::config_error, "--range must look like B:E with B < E, got '" +
                                        std::string(text) + "'");
  }
  return {a, b};
}

void cmd_eval(const EvalOptions& opt, const CommandContext& ctx) {
  const auto ck = load_checkpoint(opt.checkpoint);
  const auto mode = mode_for_input_dim(ck.cfg.input_dim);
  if (!mode) {
    throw Error(Errc::shape_inconsistency, "checkpoint input_dim " +
                                               std::to_string(ck.cfg.input_dim) +
                                               " matches no feature layout");
  }
  const RunConfig& base = opt.base;
  const auto ds = align(load_power_csv(opt.data_dir / "power.csv", base.capacity_mw),
                        load_weather_csv(opt.data_dir / "weather.csv"));
  const ModelData md = prepare(ds, *mode, split(ds.size(), base.train_frac, base.test_len));

  const std::size_t view = md.split.test_size();
  auto [lo, hi] = opt.range.value_or(std::pair<std::size_t, std::size_t>{0, view});
  if (hi > view || lo >= hi || hi - lo < 2) {
    throw Error(Errc::config_error, "range " + std::to_string(lo) + ":" + std::to_string(hi) +
                                        " is outside the test view [0, " + std::to_string(view) +
                                        ") or shorter than 2 points");
  }
  const std::size_t begin = md.split.test_begin + lo;
  const std::size_t end = md.split.test_begin + hi;

  const Model model{ck.cfg, ck.params};
  const Vector pred = predict_mw(model, md, begin, end, base.train.eval_warmup);
  const auto truth = std::span<const double>(md.target_mw).subspan(begin, end - begin);
  const auto report = evaluate(pred, truth, md.capacity_mw);
  const auto persistence = evaluate_persistence(md, begin, end);

  ensure_dir(base.out_dir);
  {
    const std::vector<EvalRow> rows = {
        to_row(ck.cfg.name() + "/" + std::string(to_string(*mode)), report),
        to_row("persistence", persistence)};
    auto os = open_out(base.out_dir / "eval.csv");
    write_eval_csv(os, rows);
  }
  auto ps = open_out(base.out_dir / "stepplot.csv");
  ps << kStepPlotCsvHeader << '\n';
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ps << format_iso8601(md.timestamps[begin + i] + kPowerStepSeconds) << ','
       << format_double(truth[i]) << ',' << format_double(pred[i]) << '\n';
  }
  note(ctx, "evaluated " + std::to_string(pred.size()) + " points: NMAE " +
                format_double(report.nmae) + "%, naive ratio " + format_double(report.naive_ratio));
}

}  // namespace gustcast

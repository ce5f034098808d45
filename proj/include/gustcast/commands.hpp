#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "gustcast/config.hpp"
#include "gustcast/data.hpp"
#include "gustcast/error.hpp"

namespace gustcast {

/// Process exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Maps an error to its exit code: configuration/argument problems are
/// usage errors, everything else is a runtime failure.
int exit_code_for(const Error& e) noexcept;

/// Progress sink; nullptr silences it.
struct CommandContext {
  std::ostream* log = nullptr;
};

/// Loads (or synthesizes) and aligns the series named by `cfg`.
AlignedDataset load_dataset(const RunConfig& cfg);

/// Writes power.csv and weather.csv into `out_dir`.
void cmd_synth(std::uint64_t seed, std::size_t points, double capacity_mw,
               const std::filesystem::path& out_dir, const CommandContext& ctx = {});

/// Trains cfg.train.replicates models and writes replicate_<k>.ckpt,
/// history_<k>.csv and eval.csv (model summary, per-replicate rows and the
/// persistence control) into cfg.out_dir.
void cmd_train(const RunConfig& cfg, const CommandContext& ctx = {});

/// Genetic search; writes best_genome.conf and generations.csv.
void cmd_hyperopt(const RunConfig& cfg, const CommandContext& ctx = {});

struct EvalOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path data_dir;  // holds power.csv and weather.csv
  /// Offsets [begin, end) inside the test view; whole view when empty.
  std::optional<std::pair<std::size_t, std::size_t>> range;
  RunConfig base;  // capacity, split and warm-up settings
};

/// Parses "B:E" into a half-open offset range.
std::pair<std::size_t, std::size_t> parse_range(std::string_view text);

/// Writes eval.csv and stepplot.csv (timestamp,truth_mw,prediction_mw) into
/// opt.base.out_dir. The range must stay inside the test view.
void cmd_eval(const EvalOptions& opt, const CommandContext& ctx = {});

inline constexpr const char* kStepPlotCsvHeader = "timestamp,truth_mw,prediction_mw";

}  // namespace gustcast

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gustcast/cells.hpp"
#include "gustcast/features.hpp"
#include "gustcast/hyperopt.hpp"
#include "gustcast/trainer.hpp"

namespace gustcast {

/// Experiment configuration, read from `key = value` lines (# starts a
/// comment). Every key is checked against a fixed schema; unknown keys and
/// bad values are all reported together in one Errc::config_error.
struct RunConfig {
  // data source: either both CSV paths or a synthetic series
  std::optional<std::filesystem::path> power_csv;
  std::optional<std::filesystem::path> weather_csv;
  std::size_t synth_points = 0;
  std::uint64_t synth_seed = 0;

  double capacity_mw = 16.0;
  double train_frac = 0.8;
  std::size_t test_len = 1000;

  Family family = Family::mlstm;
  bool cifg = false;
  bool peephole = false;
  bool compression = false;
  bool weather = true;
  bool pca = false;

  TrainConfig train;
  GAConfig ga;

  std::filesystem::path out_dir = ".";

  FeatureMode feature_mode() const noexcept;
  /// Cell layout; input_dim follows from the feature mode.
  VariantConfig variant() const;
  /// e.g. "mlstm+compression/direct"
  std::string model_name() const;
};

/// Keys accepted by parse_run_config, in documentation order.
const std::vector<std::string_view>& config_keys();

RunConfig parse_run_config(std::string_view text, const RunConfig& defaults = {});
RunConfig load_run_config(const std::filesystem::path& path, const RunConfig& defaults = {});

/// Applies one `key=value` override (same schema) to `cfg`.
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Config fragment holding the three tuned hyperparameters.
std::string genome_fragment(const Genome& g);

}  // namespace gustcast

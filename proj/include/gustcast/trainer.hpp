#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gustcast/cells.hpp"
#include "gustcast/features.hpp"
#include "gustcast/metrics.hpp"

namespace gustcast {

/// The three tuned quantities.
struct Hyperparams {
  double learning_rate = 0.05;
  std::size_t cell_dim = 16;
  std::size_t block_len = 24;  // rows unrolled per iteration

  void validate() const;
  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct TrainConfig {
  Hyperparams hyper;
  std::size_t epochs = 160000;      // one epoch = one block = one update
  std::uint64_t seed = 0;
  std::size_t replicates = 5;
  std::uint64_t seed_stride = 1;    // replicate k uses seed + k * stride
  std::size_t history_every = 100;
  double clip_norm = 0.0;           // 0 disables gradient clipping
  std::size_t eval_warmup = 288;    // rows run before an evaluation window

  void validate() const;
};

struct HistoryPoint {
  std::size_t iteration = 0;  // updates applied so far
  double train_loss = 0.0;
  double val_nmae = 0.0;
};

using TrainHistory = std::vector<HistoryPoint>;

inline constexpr const char* kHistoryCsvHeader = "iteration,train_loss,val_nmae";
void write_history_csv(std::ostream& os, const TrainHistory& h);
TrainHistory read_history_csv(std::istream& is);

struct Model {
  VariantConfig cfg;
  CellParams params;
};

Model make_model(const VariantConfig& cfg, std::uint64_t seed);

struct LossResult {
  double loss = 0.0;
  Vector d_pred;
};

/// Mean squared error and its gradient 2 (pred - truth) / N.
LossResult mse_loss(std::span<const double> pred, std::span<const double> truth);

struct BlockResult {
  double loss = 0.0;
  CellParams grads;
  CellState final_state;
  Vector predictions;
};

/// Unrolls rows [begin, begin + len) from `init`, with MSE against the
/// matching targets, and backpropagates inside the block only.
BlockResult block_gradients(const Model& model, const Matrix& inputs, std::span<const double> targets,
                            std::size_t begin, std::size_t len, const CellState& init);

/// Truncated BPTT over consecutive blocks, carrying the final (c, h) of one
/// block into the next as a constant. The cursor walks the training rows and
/// wraps to the start (with a zero state) when the next block would cross
/// the end of the partition.
class HybridTrainer {
 public:
  struct Iteration {
    std::size_t index = 0;        // 1-based update count after this step
    std::size_t block_begin = 0;
    double loss = 0.0;
    CellState state_in;
    CellState state_out;
  };

  HybridTrainer(Model& model, const ModelData& data, const TrainConfig& cfg);

  /// One block, one SGD update. Throws Errc::divergence on a non-finite loss.
  Iteration step();

  std::size_t iterations() const noexcept { return iterations_; }
  const CellState& carried_state() const noexcept { return state_; }
  std::size_t cursor() const noexcept { return cursor_; }

 private:
  Model& model_;
  const ModelData& data_;
  TrainConfig cfg_;
  CellState state_;
  std::size_t cursor_ = 0;
  std::size_t iterations_ = 0;
};

/// Runs cfg.epochs iterations; records history every cfg.history_every.
TrainHistory train_hybrid(Model& model, const ModelData& data, const TrainConfig& cfg);

/// Normalized predictions for rows [begin, end), after running the model
/// from a zero state over up to `warmup` preceding rows.
Vector predict_normalized(const Model& model, const ModelData& data, std::size_t begin,
                          std::size_t end, std::size_t warmup);
Vector predict_mw(const Model& model, const ModelData& data, std::size_t begin, std::size_t end,
                  std::size_t warmup);

EvalReport evaluate_model(const Model& model, const ModelData& data, std::size_t begin,
                          std::size_t end, std::size_t warmup);
EvalReport evaluate_persistence(const ModelData& data, std::size_t begin, std::size_t end);

struct ReplicateRun {
  std::uint64_t seed = 0;
  Model model;
  TrainHistory history;
  EvalReport test;
};

struct ExperimentResult {
  std::vector<ReplicateRun> runs;
  ReplicateStats nmae;           // over runs[k].test.nmae
  ReplicateStats naive_ratio;    // over runs[k].test.naive_ratio
  EvalReport persistence;        // same test view
};

/// Trains cfg.replicates models from seeds seed, seed + stride, ... and
/// evaluates each on the shared test view. Needs replicates >= 2.
ExperimentResult run_replicates(const TrainConfig& cfg, const ModelData& data,
                                const VariantConfig& variant);

}  // namespace gustcast

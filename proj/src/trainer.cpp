#include "gustcast/trainer.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gustcast/error.hpp"

namespace gustcast {

void Hyperparams::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw Error(Errc::invalid_argument, "learning_rate must be a finite non-negative number");
  if (cell_dim < 1) throw Error(Errc::invalid_argument, "cell_dim must be >= 1");
  if (block_len < 2) throw Error(Errc::invalid_argument, "block_len must be >= 2");
}

void TrainConfig::validate() const {
  hyper.validate();
  if (epochs < 1) throw Error(Errc::invalid_argument, "epochs must be >= 1");
  if (history_every < 1) throw Error(Errc::invalid_argument, "history_every must be >= 1");
  if (clip_norm < 0.0) throw Error(Errc::invalid_argument, "clip_norm must be >= 0");
}

void write_history_csv(std::ostream& os, const TrainHistory& h) {
  os << kHistoryCsvHeader << '\n';
  for (const auto& p : h)
    os << p.iteration << ',' << format_double(p.train_loss) << ',' << format_double(p.val_nmae) << '\n';
}

TrainHistory read_history_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kHistoryCsvHeader)
    throw Error(Errc::parse_error, "history csv: bad header");
  TrainHistory h;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    HistoryPoint p;
    auto ok = [](const std::string& s, auto& v) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && ptr == s.data() + s.size();
    };
    if (!ok(a, p.iteration) || !ok(b, p.train_loss) ||
        !(c == "inf" ? (p.val_nmae = std::numeric_limits<double>::infinity(), true) : ok(c, p.val_nmae)))
      throw Error(Errc::parse_error, "history csv: bad row '" + line + "'");
    h.push_back(p);
  }
  return h;
}

Model make_model(const VariantConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  return {cfg, CellParams::init(cfg, rng)};
}

LossResult mse_loss(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw Error(Errc::dimension_mismatch, "mse_loss: lengths " + std::to_string(pred.size()) +
                                              " and " + std::to_string(truth.size()));
  }
  const double n = static_cast<double>(pred.size());
  LossResult r;
  r.d_pred.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - truth[i];
    r.loss += e * e;
    r.d_pred[i] = 2.0 * e / n;
  }
  r.loss /= n;
  return r;
}

BlockResult block_gradients(const Model& model, const Matrix& inputs,
                            std::span<const double> targets, std::size_t begin, std::size_t len,
                            const CellState& init) {
  if (begin + len > inputs.rows() || begin + len > targets.size())
    throw Error(Errc::insufficient_data, "block_gradients: block runs past the data");
  std::vector<StepCache> caches;
  caches.reserve(len);
  BlockResult out;
  out.predictions.reserve(len);
  CellState state = init;
  for (std::size_t t = 0; t < len; ++t) {
    auto step = forward_step(model.cfg, model.params, state, inputs.row(begin + t));
    out.predictions.push_back(step.prediction);
    state = std::move(step.state);
    caches.push_back(std::move(step.cache));
  }
  const auto loss = mse_loss(out.predictions, targets.subspan(begin, len));
  out.loss = loss.loss;
  out.final_state = state;
  out.grads = CellParams::zeros(model.cfg);

  // The carried-in state is a constant: its gradient is computed and dropped.
  CellState d_next = CellState::zeros(model.cfg.cell_dim);
  for (std::size_t t = len; t-- > 0;) {
    d_next = backward_step(model.cfg, model.params, caches[t], loss.d_pred[t], d_next, out.grads)
                 .d_prev;
  }
  return out;
}

HybridTrainer::HybridTrainer(Model& model, const ModelData& data, const TrainConfig& cfg)
    : model_(model), data_(data), cfg_(cfg), state_(CellState::zeros(model.cfg.cell_dim)) {
  cfg_.validate();
  if (data.rows() == 0) throw Error(Errc::insufficient_data, "train: empty dataset");
  if (data.split.train_end < cfg.hyper.block_len + 1) {
    throw Error(Errc::insufficient_data, "train: training partition has " +
                                             std::to_string(data.split.train_end) +
                                             " rows, need block_len + 1 = " +
                                             std::to_string(cfg.hyper.block_len + 1));
  }
  if (model.cfg.input_dim != data.input_dim()) {
    throw Error(Errc::dimension_mismatch, "train: model expects " +
                                              std::to_string(model.cfg.input_dim) +
                                              " inputs, data provides " +
                                              std::to_string(data.input_dim()));
  }
}

HybridTrainer::Iteration HybridTrainer::step() {
  const std::size_t len = cfg_.hyper.block_len;
  if (cursor_ + len > data_.split.train_end) {
    cursor_ = 0;
    state_ = CellState::zeros(model_.cfg.cell_dim);
  }
  Iteration it;
  it.block_begin = cursor_;
  it.state_in = state_;

  BlockResult block = block_gradients(model_, data_.inputs, data_.targets, cursor_, len, state_);
  it.index = ++iterations_;
  it.loss = block.loss;
  if (!std::isfinite(block.loss) || !block.grads.all_finite()) {
    throw Error(Errc::divergence,
                "training diverged at iteration " + std::to_string(it.index) + " (block at row " +
                    std::to_string(it.block_begin) + ", loss " + format_double(block.loss) + ")");
  }

  double scale = cfg_.hyper.learning_rate;
  if (cfg_.clip_norm > 0.0) {
    const double g = block.grads.norm();
    if (g > cfg_.clip_norm) scale *= cfg_.clip_norm / g;
  }
  if (scale != 0.0) model_.params.add_scaled(-scale, block.grads);

  state_ = std::move(block.final_state);
  it.state_out = state_;
  cursor_ += len;
  return it;
}

TrainHistory train_hybrid(Model& model, const ModelData& data, const TrainConfig& cfg) {
  HybridTrainer trainer(model, data, cfg);
  TrainHistory history;
  const std::size_t val_begin = data.split.train_end;
  const std::size_t val_end = data.split.test_begin;
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    const auto it = trainer.step();
    if (it.index % cfg.history_every == 0 || it.index == cfg.epochs) {
      HistoryPoint p{it.index, it.loss, std::numeric_limits<double>::quiet_NaN()};
      if (val_end > val_begin) {
        p.val_nmae = evaluate_model(model, data, val_begin, val_end, cfg.eval_warmup).nmae;
      }
      history.push_back(p);
    }
  }
  return history;
}

Vector predict_normalized(const Model& model, const ModelData& data, std::size_t begin,
                          std::size_t end, std::size_t warmup) {
  if (begin >= end || end > data.rows())
    throw Error(Errc::out_of_range, "predict: rows [" + std::to_string(begin) + ", " +
                                        std::to_string(end) + ") outside dataset of " +
                                        std::to_string(data.rows()));
  const std::size_t start = begin > warmup ? begin - warmup : 0;
  CellState state = CellState::zeros(model.cfg.cell_dim);
  Vector out;
  out.reserve(end - begin);
  for (std::size_t r = start; r < end; ++r) {
    auto step = forward_step(model.cfg, model.params, state, data.inputs.row(r));
    state = std::move(step.state);
    if (r >= begin) out.push_back(step.prediction);
  }
  return out;
}

Vector predict_mw(const Model& model, const ModelData& data, std::size_t begin, std::size_t end,
                  std::size_t warmup) {
  Vector p = predict_normalized(model, data, begin, end, warmup);
  for (double& v : p) v = data.power_to_mw(v);
  return p;
}

EvalReport evaluate_model(const Model& model, const ModelData& data, std::size_t begin,
                          std::size_t end, std::size_t warmup) {
  const Vector pred = predict_mw(model, data, begin, end, warmup);
  const auto truth = std::span<const double>(data.target_mw).subspan(begin, end - begin);
  return evaluate(pred, truth, data.capacity_mw);
}

EvalReport evaluate_persistence(const ModelData& data, std::size_t begin, std::size_t end) {
  const auto truth = std::span<const double>(data.target_mw).subspan(begin, end - begin);
  return evaluate(persistence_predict(truth), truth, data.capacity_mw);
}

ExperimentResult run_replicates(const TrainConfig& cfg, const ModelData& data,
                                const VariantConfig& variant) {
  if (cfg.replicates < 2)
    throw Error(Errc::invalid_argument, "run_replicates: need at least 2 replicates");
  const std::size_t test_begin = data.split.test_begin;
  const std::size_t test_end = data.split.rows;

  ExperimentResult res;
  Vector nmae, nr;
  for (std::size_t k = 0; k < cfg.replicates; ++k) {
    ReplicateRun run;
    run.seed = cfg.seed + k * cfg.seed_stride;
    try {
      run.model = make_model(variant, run.seed);
      run.history = train_hybrid(run.model, data, cfg);
    } catch (const Error& e) {
      throw Error(e.code(), "replicate " + std::to_string(k) + ": " + e.what());
    }
    run.test = evaluate_model(run.model, data, test_begin, test_end, cfg.eval_warmup);
    nmae.push_back(run.test.nmae);
    nr.push_back(run.test.naive_ratio);
    res.runs.push_back(std::move(run));
  }
  res.nmae = margin_of_error_95(nmae);
  res.naive_ratio = margin_of_error_95(nr);
  res.persistence = evaluate_persistence(data, test_begin, test_end);
  return res;
}

}  // namespace gustcast

#include "gustcast/hyperopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "gustcast/error.hpp"

namespace gustcast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t shift_integer(std::size_t v, Rng& rng, std::size_t lo, std::size_t hi) {
  const double u = rng.uniform(-0.25, 0.25);
  auto step = static_cast<std::int64_t>(std::llround(u * static_cast<double>(v)));
  if (step == 0) step = u < 0.0 ? -1 : 1;
  const std::int64_t next = static_cast<std::int64_t>(v) + step;
  return static_cast<std::size_t>(
      std::clamp<std::int64_t>(next, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

double sanitize(double f) { return std::isnan(f) ? kInf : f; }

}  // namespace

bool Genome::within(const GenomeBounds& b) const noexcept {
  return learning_rate >= b.lr_min && learning_rate <= b.lr_max && cell_dim >= b.cell_min &&
         cell_dim <= b.cell_max && block_len >= b.block_min && block_len <= b.block_max;
}

void GAConfig::validate() const {
  if (population < 1 || partial_epochs < 1 || elite < 1 || generations < 1)
    throw Error(Errc::invalid_argument, "GA counts must all be >= 1");
  if (elite >= population) throw Error(Errc::invalid_argument, "GA elite must be < population");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
    throw Error(Errc::invalid_argument, "GA mutation_rate must lie in [0, 1]");
}

std::vector<double> GenerationLog::best_so_far() const {
  std::vector<double> out;
  double best = kInf;
  for (const auto& r : records) {
    if (r.generation >= out.size()) out.push_back(best);
    best = std::min(best, r.fitness);
    out.back() = best;
  }
  return out;
}

Genome random_genome(const GenomeBounds& b, Rng& rng) {
  Genome g;
  g.learning_rate = std::pow(10.0, rng.uniform(std::log10(b.lr_min), std::log10(b.lr_max)));
  g.cell_dim = static_cast<std::size_t>(rng.uniform_int(b.cell_min, b.cell_max));
  g.block_len = static_cast<std::size_t>(rng.uniform_int(b.block_min, b.block_max));
  return g;
}

Genome crossover(const Genome& a, const Genome& b, Rng& rng) {
  Genome c;
  c.learning_rate = rng.bernoulli(0.5) ? a.learning_rate : b.learning_rate;
  c.cell_dim = rng.bernoulli(0.5) ? a.cell_dim : b.cell_dim;
  c.block_len = rng.bernoulli(0.5) ? a.block_len : b.block_len;
  return c;
}

Genome mutate(const Genome& g, double rate, Rng& rng, const GenomeBounds& b) {
  Genome m = g;
  if (rng.bernoulli(rate)) {
    m.learning_rate = std::clamp(g.learning_rate * std::pow(10.0, rng.uniform(-0.5, 0.5)),
                                 b.lr_min, b.lr_max);
  }
  if (rng.bernoulli(rate)) m.cell_dim = shift_integer(g.cell_dim, rng, b.cell_min, b.cell_max);
  if (rng.bernoulli(rate)) m.block_len = shift_integer(g.block_len, rng, b.block_min, b.block_max);
  return m;
}

GAResult run_ga(const GAConfig& cfg, const FitnessFn& fitness) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, 0x6761));  // operator stream, separate from evaluation seeds

  struct Member {
    Genome genome;
    double fitness = kInf;
    bool cached = false;
  };
  std::vector<Member> pop(cfg.population);
  for (auto& m : pop) m.genome = random_genome(cfg.bounds, rng);

  GAResult res;
  res.best_fitness = kInf;
  bool have_best = false;

  for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (pop[i].cached) continue;
      pop[i].fitness = sanitize(fitness(pop[i].genome, derive_seed(cfg.seed, gen + 1, i)));
      ++res.log.evaluations;
    }

    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].fitness < pop[b].fitness; });
    std::vector<bool> is_elite(pop.size(), false);
    for (std::size_t e = 0; e < cfg.elite; ++e) is_elite[order[e]] = true;

    for (std::size_t i = 0; i < pop.size(); ++i) {
      res.log.records.push_back({gen, i, pop[i].genome, pop[i].fitness, bool(is_elite[i]), pop[i].cached});
      if (!have_best || pop[i].fitness < res.best_fitness) {
        res.best = pop[i].genome;
        res.best_fitness = pop[i].fitness;
        have_best = true;
      }
    }
    if (gen + 1 == cfg.generations) break;

    std::vector<Member> next;
    next.reserve(cfg.population);
    for (std::size_t e = 0; e < cfg.elite; ++e) {
      Member m = pop[order[e]];
      m.cached = true;
      next.push_back(m);
    }
    while (next.size() < cfg.population) {
      std::size_t a = 0, b = cfg.elite > 1 ? 1 : 0;
      if (cfg.elite > 2) {
        a = static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(cfg.elite) - 1));
        do {
          b = static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(cfg.elite) - 1));
        } while (b == a);
      }
      Member child;
      child.genome = mutate(crossover(next[a].genome, next[b].genome, rng), cfg.mutation_rate,
                            rng, cfg.bounds);
      next.push_back(child);
    }
    pop = std::move(next);
  }
  return res;
}

double evaluate_genome(const Genome& g, const VariantConfig& base, const ModelData& data,
                       std::size_t partial_epochs, std::uint64_t seed, std::size_t eval_warmup) {
  if (data.split.validation_size() < 2) {
    throw Error(Errc::insufficient_data, "evaluate_genome: validation view has " +
                                             std::to_string(data.split.validation_size()) +
                                             " rows, need at least 2");
  }
  VariantConfig cfg = base;
  cfg.cell_dim = g.cell_dim;
  cfg.input_dim = data.input_dim();

  TrainConfig tc;
  tc.hyper = g.hyperparams();
  tc.epochs = partial_epochs;
  tc.seed = seed;
  tc.history_every = partial_epochs;  // history is not used here
  tc.eval_warmup = eval_warmup;

  Model model = make_model(cfg, seed);
  try {
    HybridTrainer trainer(model, data, tc);
    for (std::size_t e = 0; e < partial_epochs; ++e) trainer.step();
    const auto r = evaluate_model(model, data, data.split.train_end, data.split.test_begin,
                                  eval_warmup);
    return std::isfinite(r.nmae) ? r.nmae : kInf;
  } catch (const Error& e) {
    if (e.code() == Errc::divergence || e.code() == Errc::non_finite) return kInf;
    throw;
  }
}

void write_generation_csv(std::ostream& os, const GenerationLog& log) {
  os << kGenerationCsvHeader << '\n';
  for (const auto& r : log.records) {
    os << r.generation << ',' << r.child << ',' << format_double(r.genome.learning_rate) << ','
       << r.genome.cell_dim << ',' << r.genome.block_len << ',' << format_double(r.fitness) << '\n';
  }
}

}  // namespace gustcast

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "gustcast/rng.hpp"
#include "gustcast/trainer.hpp"

namespace gustcast {

struct GenomeBounds {
  double lr_min = 1e-5;
  double lr_max = 1e-1;
  std::size_t cell_min = 4;
  std::size_t cell_max = 256;
  std::size_t block_min = 2;
  std::size_t block_max = 64;
};

struct Genome {
  double learning_rate = 1e-2;
  std::size_t cell_dim = 16;
  std::size_t block_len = 16;

  Hyperparams hyperparams() const { return {learning_rate, cell_dim, block_len}; }
  bool within(const GenomeBounds& b) const noexcept;
  friend bool operator==(const Genome&, const Genome&) = default;
};

struct GAConfig {
  std::size_t population = 10;
  std::size_t partial_epochs = 3000;
  std::size_t elite = 2;
  std::size_t generations = 20;
  double mutation_rate = 0.25;
  std::uint64_t seed = 0;
  GenomeBounds bounds;

  void validate() const;
};

struct GenomeRecord {
  std::size_t generation = 0;
  std::size_t child = 0;
  Genome genome;
  double fitness = 0.0;  // validation NMAE %, +inf when training diverged
  bool elite = false;    // kept for the next generation
  bool cached = false;   // carried over; fitness not recomputed
};

struct GenerationLog {
  std::vector<GenomeRecord> records;  // generation-major, `population` per generation
  std::size_t evaluations = 0;

  /// Best fitness seen up to and including each generation.
  std::vector<double> best_so_far() const;
};

struct GAResult {
  Genome best;
  double best_fitness = 0.0;
  GenerationLog log;
};

/// Fitness of one genome under a derived seed; lower is better.
using FitnessFn = std::function<double(const Genome&, std::uint64_t seed)>;

Genome random_genome(const GenomeBounds& b, Rng& rng);
/// Uniform crossover: each gene from a or b with probability 1/2.
Genome crossover(const Genome& a, const Genome& b, Rng& rng);
/// Each gene perturbed with probability `rate`; result clamped to bounds.
Genome mutate(const Genome& g, double rate, Rng& rng, const GenomeBounds& b = {});

/// Generation 0 is random; each later generation keeps the `elite` best
/// (fitness cached) and fills up with mutated crossovers of elite pairs.
GAResult run_ga(const GAConfig& cfg, const FitnessFn& fitness);

/// Trains `partial_epochs` iterations and returns validation NMAE, or +inf
/// if training diverged.
double evaluate_genome(const Genome& g, const VariantConfig& base, const ModelData& data,
                       std::size_t partial_epochs, std::uint64_t seed,
                       std::size_t eval_warmup = 288);

inline constexpr const char* kGenerationCsvHeader =
    "generation,child,learning_rate,cell_dim,block_len,fitness_nmae";
void write_generation_csv(std::ostream& os, const GenerationLog& log);

}  // namespace gustcast

#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <sstream>

#include "gustcast/error.hpp"
#include "gustcast/hyperopt.hpp"
#include "oracles/rigged.hpp"

using namespace gustcast;

TEST_CASE("crossover picks each gene from a parent") {
  Rng rng(1);
  Genome a{0.01, 10, 5}, b{0.001, 100, 50};
  CHECK(crossover(a, a, rng) == a);
  int from_a[3] = {0, 0, 0};
  const int n = 1000;
  for (int k = 0; k < n; ++k) {
    auto c = crossover(a, b, rng);
    CHECK((c.learning_rate == a.learning_rate || c.learning_rate == b.learning_rate));
    CHECK((c.cell_dim == a.cell_dim || c.cell_dim == b.cell_dim));
    CHECK((c.block_len == a.block_len || c.block_len == b.block_len));
    from_a[0] += c.learning_rate == a.learning_rate;
    from_a[1] += c.cell_dim == a.cell_dim;
    from_a[2] += c.block_len == a.block_len;
  }
  for (int f : from_a) CHECK(std::abs(f / double(n) - 0.5) <= 0.05);
}

TEST_CASE("mutation") {
  GenomeBounds b;
  Rng rng(2);
  Genome g{0.01, 32, 16};
  CHECK(mutate(g, 0.0, rng, b) == g);
  for (int k = 0; k < 200; ++k) {
    auto m = mutate(g, 1.0, rng, b);
    CHECK(m.learning_rate != g.learning_rate);
    CHECK(m.cell_dim != g.cell_dim);
    CHECK(m.block_len != g.block_len);
    CHECK(std::abs(std::log10(m.learning_rate / g.learning_rate)) <= 0.5);
    CHECK(std::abs(double(m.cell_dim) - 32.0) <= 8.0);
  }
  Genome edge{b.lr_max, b.cell_max, b.block_min};
  Genome cur = edge;
  for (int k = 0; k < 10000; ++k) {
    cur = mutate(cur, 0.7, rng, b);
    CHECK(cur.within(b));
    if (k % 100 == 0) cur = k % 200 ? edge : random_genome(b, rng);
  }
  Genome small{0.01, 4, 2};
  for (int k = 0; k < 100; ++k) {
    auto m = mutate(small, 1.0, rng, b);
    CHECK(m.within(b));
  }
}

TEST_CASE("random genomes respect bounds") {
  GenomeBounds b;
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) CHECK(random_genome(b, rng).within(b));
}

TEST_CASE("ten-two-twenty protocol evaluates 162 genomes") {
  GAConfig cfg;
  cfg.seed = 9;
  std::size_t calls = 0;
  const Genome target{3e-3, 40, 20};
  auto res = run_ga(cfg, [&](const Genome& g, std::uint64_t) {
    ++calls;
    return oracle::rigged_distance(g, target);
  });
  CHECK(calls == 162);
  CHECK(res.log.evaluations == 162);
  CHECK(res.log.records.size() == 200);
  auto best = res.log.best_so_far();
  REQUIRE(best.size() == 20);
  for (std::size_t k = 1; k < best.size(); ++k) CHECK(best[k] <= best[k - 1]);

  // The best of each generation never gets worse.
  for (std::size_t gen = 1; gen < 20; ++gen) {
    double prev = std::numeric_limits<double>::infinity(), cur = prev;
    for (const auto& r : res.log.records) {
      if (r.generation == gen - 1) prev = std::min(prev, r.fitness);
      if (r.generation == gen) cur = std::min(cur, r.fitness);
    }
    CHECK(cur <= prev);
  }
  std::size_t cached = 0;
  for (const auto& r : res.log.records) {
    CHECK(r.genome.within(cfg.bounds));
    cached += r.cached;
  }
  CHECK(cached == 38);
  CHECK(res.best_fitness == best.back());
}

TEST_CASE("rigged fitness converges for most seeds") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng pick(seed + 1000);
    const Genome target = random_genome(GenomeBounds{}, pick);
    GAConfig cfg;
    cfg.seed = seed;
    auto res = run_ga(cfg, [&](const Genome& g, std::uint64_t) { return oracle::rigged_distance(g, target); });
    hits += oracle::within_one_step(res.best, target);
  }
  CHECK(hits >= 8);
}

TEST_CASE("search is reproducible and seeds are distinct") {
  GAConfig cfg;
  cfg.seed = 4;
  cfg.generations = 5;
  std::vector<std::uint64_t> seeds;
  auto f = [&](const Genome& g, std::uint64_t s) {
    seeds.push_back(s);
    return g.learning_rate * double(g.cell_dim);
  };
  auto a = run_ga(cfg, f);
  const auto first = seeds;
  seeds.clear();
  auto b = run_ga(cfg, f);
  CHECK(seeds == first);
  REQUIRE(a.log.records.size() == b.log.records.size());
  for (std::size_t k = 0; k < a.log.records.size(); ++k) {
    CHECK(a.log.records[k].genome == b.log.records[k].genome);
    CHECK(a.log.records[k].fitness == b.log.records[k].fitness);
  }
  auto sorted = first;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("nan fitness counts as infinitely bad") {
  GAConfig cfg;
  cfg.generations = 2;
  auto res = run_ga(cfg, [](const Genome& g, std::uint64_t) {
    return g.cell_dim % 2 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  });
  for (const auto& r : res.log.records) CHECK_FALSE(std::isnan(r.fitness));
}

TEST_CASE("ga config validation") {
  GAConfig c;
  c.elite = 10;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.mutation_rate = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.generations = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("genome evaluation trains and scores on validation") {
  auto d = synth_generate(2, 1800);
  auto ds = align(d.power, d.weather);
  auto md = prepare(ds, FeatureMode::power_only, Split{1200, 1500, ds.size()});
  VariantConfig base;
  base.family = Family::mlstm;
  Genome g{0.05, 6, 12};
  const double a = evaluate_genome(g, base, md, 100, 7, 48);
  CHECK(a == evaluate_genome(g, base, md, 100, 7, 48));
  CHECK(std::isfinite(a));
  CHECK(a > 0.0);

  VariantConfig generic;
  generic.family = Family::generic;
  CHECK(evaluate_genome({1e6, 8, 24}, generic, md, 200, 1, 48) == std::numeric_limits<double>::infinity());

  auto tiny = md;
  tiny.split = Split{1200, 1201, ds.size()};
  CHECK_THROWS_AS(evaluate_genome(g, base, tiny, 10, 1, 48), Error);
}

TEST_CASE("generation log csv") {
  GAConfig cfg;
  cfg.generations = 3;
  cfg.population = 4;
  auto res = run_ga(cfg, [](const Genome& g, std::uint64_t) {
    return g.block_len > 30 ? std::numeric_limits<double>::infinity() : double(g.block_len);
  });
  std::stringstream ss;
  write_generation_csv(ss, res.log);
  std::string line;
  std::getline(ss, line);
  CHECK(line == kGenerationCsvHeader);
  std::size_t rows = 0;
  while (std::getline(ss, line)) {
    ++rows;
    const auto fit = line.substr(line.rfind(',') + 1);
    CHECK((fit == "inf" || std::isfinite(std::stod(fit))));
  }
  CHECK(rows == 12);
}

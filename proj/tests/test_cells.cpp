#include <doctest.h>

#include <cmath>

#include "gustcast/cells.hpp"
#include "gustcast/error.hpp"
#include "oracles/gradcheck.hpp"
#include "oracles/instances.hpp"

using namespace gustcast;

namespace {

VariantConfig mlstm(std::size_t in, std::size_t cell, bool cifg = false, bool peep = false, bool comp = false) {
  VariantConfig v;
  v.family = Family::mlstm;
  v.cifg = cifg;
  v.peephole = peep;
  v.compression = comp;
  v.input_dim = in;
  v.cell_dim = cell;
  return v;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

TEST_CASE("zero parameters give the fixed point") {
  for (bool cifg : {false, true}) {
    auto cfg = mlstm(3, 4, cifg);
    auto r = forward_step(cfg, CellParams::zeros(cfg), CellState::zeros(4), Vector{0.3, -2.0, 7.0});
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(r.cache.i[j] == 0.5);
      CHECK(r.cache.f[j] == 0.5);
      CHECK(r.cache.o[j] == 0.5);
      CHECK(r.cache.g[j] == 0.0);
      CHECK(r.state.c[j] == 0.0);
    }
    CHECK(r.prediction == 0.0);
  }
}

TEST_CASE("cifg forget gate is the complement of the input gate") {
  auto cfg = mlstm(1, 2, true);
  auto p = CellParams::zeros(cfg);
  p[Slot::b_i](0, 0) = logit(0.3);
  p[Slot::b_i](1, 0) = logit(0.9);
  auto r = forward_step(cfg, p, CellState::zeros(2), Vector{0.0});
  CHECK(r.cache.i[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r.cache.i[1] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(r.cache.f[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(r.cache.f[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_FALSE(slot_shape(cfg, Slot::W_f).has_value());
  CHECK(p[Slot::W_f].empty());
}

TEST_CASE("mlstm cell stays bounded and output non-negative on random walks") {
  for (const auto& cfg : oracle::all_variants(4, 3)) {
    if (cfg.family != Family::mlstm) continue;
    CAPTURE(cfg.name());
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto in = oracle::random_instance(cfg, seed, 3.0);
      Rng rng(seed + 100);
      CellState s = CellState::zeros(cfg.cell_dim);
      for (int t = 0; t < 500; ++t) {
        Vector x(cfg.input_dim);
        for (double& v : x) v = rng.normal(0.0, 20.0);
        auto r = forward_step(cfg, in.params, s, x);
        for (double c : r.state.c) CHECK((c > -1.0 && c < 1.0));
        CHECK(r.prediction >= 0.0);
        if (cfg.cifg)
          for (std::size_t j = 0; j < cfg.cell_dim; ++j)
            CHECK(std::abs(r.cache.f[j] + r.cache.i[j] - 1.0) <= 1e-12);
        s = r.state;
      }
    }
  }
}

TEST_CASE("generic head is linear and can go negative") {
  VariantConfig g;
  g.family = Family::generic;
  g.input_dim = 1;
  g.cell_dim = 2;
  CHECK_FALSE(slot_shape(g, Slot::head_b).has_value());
  auto p = CellParams::zeros(g);
  p[Slot::b_g](0, 0) = 2.0;
  p[Slot::b_i](0, 0) = 5.0;
  p[Slot::head_W](0, 0) = -3.0;
  auto r = forward_step(g, p, CellState::zeros(2), Vector{0.0});
  CHECK(r.prediction < 0.0);
  CHECK(r.prediction == doctest::Approx(-3.0 * r.state.h[0]).epsilon(1e-15));
}

TEST_CASE("compression layer") {
  auto cfg = mlstm(3, 2, false, false, true);
  CHECK(cfg.gate_input_dim() == 2);
  auto p = CellParams::zeros(cfg);
  CHECK(compress_input(cfg, p, Vector{2, 2}) == Vector{0});
  p[Slot::comp_W](0, 0) = 1;
  p[Slot::comp_W](0, 1) = 1;
  p[Slot::comp_b](0, 0) = -5;
  CHECK(compress_input(cfg, p, Vector{2, 2}) == Vector{0});
  p[Slot::comp_W](0, 0) = 0.5;
  p[Slot::comp_W](0, 1) = 0.5;
  p[Slot::comp_b](0, 0) = 0;
  CHECK(compress_input(cfg, p, Vector{2, 4}) == Vector{3});

  auto plain = mlstm(3, 2);
  CHECK_THROWS_AS(compress_input(plain, CellParams::zeros(plain), Vector{1, 1}), Error);
}

TEST_CASE("variant validation") {
  VariantConfig g;
  g.family = Family::generic;
  g.cifg = true;
  CHECK_THROWS_AS(g.validate(), Error);
  auto c = mlstm(1, 4, false, false, true);
  CHECK_THROWS_AS(c.validate(), Error);
  auto z = mlstm(3, 0);
  CHECK_THROWS_AS(z.validate(), Error);
  CHECK(mlstm(11, 4, true, true, true).name() == "mlstm+cifg+peephole+compression");
}

TEST_CASE("forward rejects bad shapes and non-finite input") {
  auto cfg = mlstm(3, 2);
  auto p = CellParams::zeros(cfg);
  CHECK_THROWS_AS(forward_step(cfg, p, CellState::zeros(2), Vector{1, 2}), Error);
  CHECK_THROWS_AS(forward_step(cfg, p, CellState::zeros(3), Vector{1, 2, 3}), Error);
  CHECK_THROWS_AS(forward_step(cfg, p, CellState::zeros(2), Vector{1, NAN, 3}), Error);
  auto other = CellParams::zeros(mlstm(4, 2));
  CHECK_THROWS_AS(forward_step(cfg, other, CellState::zeros(2), Vector{1, 2, 3}), Error);
}

TEST_CASE("replaying a cached step reproduces it") {
  for (const auto& cfg : oracle::all_variants(4, 3)) {
    auto in = oracle::random_instance(cfg, 5);
    auto a = forward_step(cfg, in.params, in.state, in.x);
    auto b = forward_step(cfg, in.params, CellState{a.cache.c_prev, a.cache.h_prev}, a.cache.x);
    CHECK(a.state == b.state);
    CHECK(a.prediction == b.prediction);
    CHECK(a.cache.i == b.cache.i);
    CHECK(a.cache.c_raw == b.cache.c_raw);
  }
}

TEST_CASE("null upstream gives zero gradients") {
  for (const auto& cfg : oracle::all_variants(4, 3)) {
    auto in = oracle::random_instance(cfg, 9);
    auto r = forward_step(cfg, in.params, in.state, in.x);
    auto grads = CellParams::zeros(cfg);
    auto back = backward_step(cfg, in.params, r.cache, 0.0, CellState::zeros(3), grads);
    CHECK(grads.norm() == 0.0);
    for (double v : back.d_prev.c) CHECK(v == 0.0);
    for (double v : back.d_prev.h) CHECK(v == 0.0);
    for (double v : back.d_x) CHECK(v == 0.0);
  }
}

TEST_CASE("analytic gradients match central differences for every variant") {
  for (std::size_t in_dim : {3u, 5u}) {
    for (std::size_t cell : {1u, 2u, 4u}) {
      for (const auto& cfg : oracle::all_variants(in_dim, cell)) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
          auto in = oracle::random_instance(cfg, seed * 31 + cell);
          auto gc = oracle::check_step(cfg, in.params, in.state, in.x, in.up);
          CAPTURE(cfg.name());
          CAPTURE(seed);
          CAPTURE(gc.worst);
          CHECK(gc.max_rel < 1e-5);
        }
      }
    }
  }
}

TEST_CASE("dead relu head passes no gradient") {
  auto cfg = mlstm(3, 3);
  auto in = oracle::random_instance(cfg, 4);
  in.params[Slot::head_b](0, 0) = -100.0;
  auto r = forward_step(cfg, in.params, in.state, in.x);
  CHECK(r.prediction == 0.0);
  auto grads = CellParams::zeros(cfg);
  backward_step(cfg, in.params, r.cache, 1.0, CellState::zeros(3), grads);
  CHECK(grads[Slot::head_b](0, 0) == 0.0);
  for (double v : grads[Slot::head_W].values()) CHECK(v == 0.0);
  CHECK(grads.norm() == 0.0);
}

TEST_CASE("zero peepholes reduce to the plain cell") {
  auto plain = mlstm(4, 3);
  auto peep = mlstm(4, 3, false, true);
  auto in = oracle::random_instance(plain, 12);
  auto p2 = CellParams::zeros(peep);
  for (std::size_t k = 0; k < kSlotCount; ++k)
    if (!in.params.tensors[k].empty()) p2.tensors[k] = in.params.tensors[k];
  CellState s1 = in.state, s2 = in.state;
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    Vector x{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    auto a = forward_step(plain, in.params, s1, x);
    auto b = forward_step(peep, p2, s2, x);
    CHECK(a.state == b.state);
    CHECK(a.prediction == b.prediction);
    s1 = a.state;
    s2 = b.state;
  }
}

TEST_CASE("initialisation is seeded and shape-complete") {
  for (const auto& cfg : oracle::all_variants(11, 6)) {
    Rng a(3), b(3);
    auto p = CellParams::init(cfg, a);
    CHECK(p == CellParams::init(cfg, b));
    p.validate(cfg);
    for (std::size_t k = 0; k < kSlotCount; ++k) {
      auto shape = slot_shape(cfg, static_cast<Slot>(k));
      CHECK(shape.has_value() != p.tensors[k].empty());
    }
  }
}

TEST_CASE("persistence baseline") {
  CHECK(persistence_predict(Vector{1, 2, 3}) == Vector{1, 1, 2});
  CHECK(persistence_predict(Vector{5, 5, 5}) == Vector{5, 5, 5});
  CHECK_THROWS_AS(persistence_predict(Vector{1}), Error);
}

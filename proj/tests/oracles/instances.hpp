#pragma once

// Random small cell instances shared by unit and acceptance tests.

#include <vector>

#include "gustcast/cells.hpp"
#include "gustcast/rng.hpp"
#include "oracles/gradcheck.hpp"

namespace oracle {

struct Instance {
  gustcast::CellParams params;
  gustcast::CellState state;
  gustcast::Vector x;
  Upstream up;
};

inline std::vector<gustcast::VariantConfig> all_variants(std::size_t input_dim, std::size_t cell_dim) {
  using gustcast::Family;
  std::vector<gustcast::VariantConfig> out;
  gustcast::VariantConfig g;
  g.family = Family::generic;
  g.input_dim = input_dim;
  g.cell_dim = cell_dim;
  out.push_back(g);
  for (int mask = 0; mask < 8; ++mask) {
    gustcast::VariantConfig v;
    v.family = Family::mlstm;
    v.cifg = mask & 1;
    v.peephole = mask & 2;
    v.compression = mask & 4;
    v.input_dim = input_dim;
    v.cell_dim = cell_dim;
    out.push_back(v);
  }
  return out;
}

inline Instance random_instance(const gustcast::VariantConfig& cfg, std::uint64_t seed, double scale = 0.7) {
  gustcast::Rng rng(seed);
  Instance in;
  in.params = gustcast::CellParams::zeros(cfg);
  in.params.for_each([&](gustcast::Slot, gustcast::Matrix& m) {
    for (double& v : m.values()) v = rng.normal(0.0, scale);
  });
  const std::size_t n = cfg.cell_dim;
  in.state = gustcast::CellState::zeros(n);
  for (std::size_t j = 0; j < n; ++j) {
    in.state.c[j] = rng.uniform(-0.9, 0.9);
    in.state.h[j] = rng.uniform(-0.9, 0.9);
  }
  in.x.resize(cfg.input_dim);
  for (double& v : in.x) v = rng.uniform(-1.0, 1.0);
  in.up.wp = rng.normal();
  in.up.wc.resize(n);
  in.up.wh.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    in.up.wc[j] = rng.normal();
    in.up.wh[j] = rng.normal();
  }
  return in;
}

}  // namespace oracle

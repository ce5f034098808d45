#include "gustcast/cells.hpp"

#include <cmath>

#include "gustcast/error.hpp"

namespace gustcast {

namespace {

constexpr std::array<std::string_view, kSlotCount> kSlotNames = {
    "W_f", "U_f", "b_f", "W_i", "U_i", "b_i", "W_o", "U_o", "b_o", "W_g",
    "U_g", "b_g", "p_f", "p_i", "p_o", "head_W", "head_b", "comp_W", "comp_b"};

double sigmoid(double x) noexcept { return activate(Activation::sigmoid, x); }

void check_len(std::string_view what, std::size_t got, std::size_t want) {
  if (got != want) {
    throw Error(Errc::dimension_mismatch, std::string(what) + ": expected length " +
                                              std::to_string(want) + ", got " +
                                              std::to_string(got));
  }
}

// pre = W * x + U * h + b
Vector gate_preactivation(const CellParams& p, Slot W, Slot U, Slot b, std::span<const double> x,
                          std::span<const double> h) {
  Vector pre(p[b].values().begin(), p[b].values().end());
  matvec_acc(p[W], x, pre);
  matvec_acc(p[U], h, pre);
  return pre;
}

void accumulate_gate(const CellParams& p, CellParams& grads, Slot W, Slot U, Slot b,
                     std::span<const double> d_pre, const StepCache& cache, Vector& d_gate_in,
                     Vector& d_h_prev) {
  outer_acc(grads[W], d_pre, cache.gate_in);
  outer_acc(grads[U], d_pre, cache.h_prev);
  axpy(1.0, d_pre, grads[b].values());
  matvec_transposed_acc(p[W], d_pre, d_gate_in);
  matvec_transposed_acc(p[U], d_pre, d_h_prev);
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  return f == Family::generic ? "generic" : "mlstm";
}

std::optional<Family> parse_family(std::string_view s) noexcept {
  if (s == "generic") return Family::generic;
  if (s == "mlstm") return Family::mlstm;
  return std::nullopt;
}

void VariantConfig::validate() const {
  if (cell_dim < 1) throw Error(Errc::invalid_argument, "cell_dim must be >= 1");
  if (input_dim < 1) throw Error(Errc::invalid_argument, "input_dim must be >= 1");
  if (family == Family::generic && (cifg || peephole || compression)) {
    throw Error(Errc::invalid_argument,
                "generic family does not take cifg/peephole/compression flags");
  }
  if (compression && input_dim < 2) {
    throw Error(Errc::invalid_argument, "compression needs at least one weather feature");
  }
}

std::string VariantConfig::name() const {
  std::string n(to_string(family));
  if (cifg) n += "+cifg";
  if (peephole) n += "+peephole";
  if (compression) n += "+compression";
  return n;
}

std::string_view slot_name(Slot s) noexcept { return kSlotNames[static_cast<std::size_t>(s)]; }

std::optional<Slot> slot_from_name(std::string_view name) noexcept {
  for (std::size_t k = 0; k < kSlotCount; ++k)
    if (kSlotNames[k] == name) return static_cast<Slot>(k);
  return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> slot_shape(const VariantConfig& cfg, Slot s) {
  const std::size_t n = cfg.cell_dim;
  const std::size_t in = cfg.gate_input_dim();
  using P = std::pair<std::size_t, std::size_t>;
  switch (s) {
    case Slot::W_f: return cfg.cifg ? std::nullopt : std::optional<P>(P{n, in});
    case Slot::U_f: return cfg.cifg ? std::nullopt : std::optional<P>(P{n, n});
    case Slot::b_f: return cfg.cifg ? std::nullopt : std::optional<P>(P{n, 1});
    case Slot::W_i: case Slot::W_o: case Slot::W_g: return P{n, in};
    case Slot::U_i: case Slot::U_o: case Slot::U_g: return P{n, n};
    case Slot::b_i: case Slot::b_o: case Slot::b_g: return P{n, 1};
    case Slot::p_f:
      return (cfg.peephole && !cfg.cifg) ? std::optional<P>(P{n, 1}) : std::nullopt;
    case Slot::p_i: case Slot::p_o:
      return cfg.peephole ? std::optional<P>(P{n, 1}) : std::nullopt;
    case Slot::head_W: return P{1, n};
    case Slot::head_b:
      return cfg.family == Family::mlstm ? std::optional<P>(P{1, 1}) : std::nullopt;
    case Slot::comp_W:
      return cfg.compression ? std::optional<P>(P{1, cfg.weather_dim()}) : std::nullopt;
    case Slot::comp_b: return cfg.compression ? std::optional<P>(P{1, 1}) : std::nullopt;
    case Slot::count: break;
  }
  return std::nullopt;
}

CellParams CellParams::zeros(const VariantConfig& cfg) {
  cfg.validate();
  CellParams p;
  for (std::size_t k = 0; k < kSlotCount; ++k) {
    if (auto shape = slot_shape(cfg, static_cast<Slot>(k)))
      p.tensors[k] = Matrix(shape->first, shape->second);
  }
  return p;
}

CellParams CellParams::init(const VariantConfig& cfg, Rng& rng) {
  CellParams p = zeros(cfg);
  for (Slot s : {Slot::W_f, Slot::U_f, Slot::W_i, Slot::U_i, Slot::W_o, Slot::U_o, Slot::W_g,
                 Slot::U_g, Slot::p_f, Slot::p_i, Slot::p_o, Slot::head_W, Slot::comp_W}) {
    if (!p[s].empty()) p[s] = glorot_init(p[s].rows(), p[s].cols(), rng);
  }
  for (double& b : p[Slot::b_f].values()) b = 1.0;
  // Keep both ReLU layers out of their dead region at the start.
  for (double& b : p[Slot::head_b].values()) b = 0.5;
  for (double& b : p[Slot::comp_b].values()) b = 0.5;
  return p;
}

void CellParams::validate(const VariantConfig& cfg) const {
  for (std::size_t k = 0; k < kSlotCount; ++k) {
    const auto s = static_cast<Slot>(k);
    const auto shape = slot_shape(cfg, s);
    const Matrix& m = tensors[k];
    if (!shape) {
      if (!m.empty()) {
        throw Error(Errc::shape_inconsistency,
                    "tensor " + std::string(slot_name(s)) + " is not used by " + cfg.name());
      }
    } else if (m.rows() != shape->first || m.cols() != shape->second) {
      throw Error(Errc::shape_inconsistency,
                  "tensor " + std::string(slot_name(s)) + " has " + m.shape_string() +
                      ", expected " + Matrix(shape->first, shape->second).shape_string());
    }
  }
}

std::size_t CellParams::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

void CellParams::add_scaled(double alpha, const CellParams& other) {
  for (std::size_t k = 0; k < kSlotCount; ++k) {
    if (tensors[k].size() != other.tensors[k].size()) {
      throw Error(Errc::shape_inconsistency, "add_scaled: layout mismatch at " +
                                                 std::string(kSlotNames[k]));
    }
    if (!tensors[k].empty()) axpy(alpha, other.tensors[k].values(), tensors[k].values());
  }
}

void CellParams::set_zero() noexcept {
  for (auto& t : tensors)
    for (double& x : t.values()) x = 0.0;
}

double CellParams::norm() const noexcept {
  double s = 0.0;
  for (const auto& t : tensors)
    for (double x : t.values()) s += x * x;
  return std::sqrt(s);
}

bool CellParams::all_finite() const noexcept {
  for (const auto& t : tensors)
    if (!gustcast::all_finite(t.values())) return false;
  return true;
}

Vector compress_input(const VariantConfig& cfg, const CellParams& params,
                      std::span<const double> weather) {
  if (!cfg.compression) {
    throw Error(Errc::invalid_argument, "compress_input called with compression disabled");
  }
  check_len("compress_input weather", weather.size(), cfg.weather_dim());
  Vector z(params[Slot::comp_b].values().begin(), params[Slot::comp_b].values().end());
  matvec_acc(params[Slot::comp_W], weather, z);
  for (double& v : z) v = activate(Activation::relu, v);
  return z;
}

StepResult forward_step(const VariantConfig& cfg, const CellParams& params,
                        const CellState& state, std::span<const double> x) {
  const std::size_t n = cfg.cell_dim;
  check_len("forward_step input", x.size(), cfg.input_dim);
  check_len("forward_step cell state", state.c.size(), n);
  check_len("forward_step hidden state", state.h.size(), n);
  if (!all_finite(x)) throw Error(Errc::non_finite, "forward_step: non-finite input");

  StepResult out;
  StepCache& k = out.cache;
  k.cfg = cfg;
  k.x.assign(x.begin(), x.end());
  k.c_prev = state.c;
  k.h_prev = state.h;

  if (cfg.compression) {
    const auto weather = x.subspan(1);
    k.comp_pre.assign(params[Slot::comp_b].values().begin(), params[Slot::comp_b].values().end());
    matvec_acc(params[Slot::comp_W], weather, k.comp_pre);
    k.gate_in.reserve(1 + k.comp_pre.size());
    k.gate_in.push_back(x[0]);
    for (double v : k.comp_pre) k.gate_in.push_back(activate(Activation::relu, v));
  } else {
    k.gate_in = k.x;
  }

  k.i = gate_preactivation(params, Slot::W_i, Slot::U_i, Slot::b_i, k.gate_in, k.h_prev);
  if (cfg.peephole) {
    const auto p_i = params[Slot::p_i].values();
    for (std::size_t j = 0; j < n; ++j) k.i[j] += p_i[j] * k.c_prev[j];
  }
  for (double& v : k.i) v = sigmoid(v);

  if (cfg.cifg) {
    k.f = elementwise(Activation::one_minus, k.i);
  } else {
    k.f = gate_preactivation(params, Slot::W_f, Slot::U_f, Slot::b_f, k.gate_in, k.h_prev);
    if (cfg.peephole) {
      const auto p_f = params[Slot::p_f].values();
      for (std::size_t j = 0; j < n; ++j) k.f[j] += p_f[j] * k.c_prev[j];
    }
    for (double& v : k.f) v = sigmoid(v);
  }

  k.g = gate_preactivation(params, Slot::W_g, Slot::U_g, Slot::b_g, k.gate_in, k.h_prev);
  for (double& v : k.g) v = std::tanh(v);

  k.c_raw.resize(n);
  for (std::size_t j = 0; j < n; ++j) k.c_raw[j] = k.f[j] * k.c_prev[j] + k.i[j] * k.g[j];
  k.c = cfg.family == Family::mlstm ? elementwise(Activation::tanh, k.c_raw) : k.c_raw;

  k.o = gate_preactivation(params, Slot::W_o, Slot::U_o, Slot::b_o, k.gate_in, k.h_prev);
  if (cfg.peephole) {
    const auto p_o = params[Slot::p_o].values();
    for (std::size_t j = 0; j < n; ++j) k.o[j] += p_o[j] * k.c[j];
  }
  for (double& v : k.o) v = sigmoid(v);

  k.q = cfg.family == Family::mlstm ? k.c : elementwise(Activation::tanh, k.c);
  k.h.resize(n);
  for (std::size_t j = 0; j < n; ++j) k.h[j] = k.o[j] * k.q[j];

  k.head_pre = dot(params[Slot::head_W].values(), k.h);
  if (cfg.family == Family::mlstm) {
    k.head_pre += params[Slot::head_b](0, 0);
    out.prediction = activate(Activation::relu, k.head_pre);
  } else {
    out.prediction = k.head_pre;
  }

  out.state = {k.c, k.h};
  return out;
}

BackwardResult backward_step(const VariantConfig& cfg, const CellParams& params,
                             const StepCache& k, double d_prediction, const CellState& d_next,
                             CellParams& grads) {
  if (!(k.cfg == cfg)) {
    throw Error(Errc::invalid_argument, "backward_step: cache was produced by " + k.cfg.name() +
                                            ", not " + cfg.name());
  }
  const std::size_t n = cfg.cell_dim;
  check_len("backward_step d_next.c", d_next.c.size(), n);
  check_len("backward_step d_next.h", d_next.h.size(), n);
  if (k.h.size() != n) throw Error(Errc::invalid_argument, "backward_step: cache/config mismatch");

  // Output head.
  Vector dh = d_next.h;
  double d_head = d_prediction;
  if (cfg.family == Family::mlstm) {
    d_head = k.head_pre > 0.0 ? d_prediction : 0.0;
    grads[Slot::head_b](0, 0) += d_head;
  }
  if (d_head != 0.0) {
    axpy(d_head, k.h, grads[Slot::head_W].values());
    axpy(d_head, params[Slot::head_W].values(), dh);
  }

  // h = o * q
  Vector d_o_pre(n), dc(d_next.c);
  for (std::size_t j = 0; j < n; ++j) {
    const double d_o = dh[j] * k.q[j];
    d_o_pre[j] = d_o * k.o[j] * (1.0 - k.o[j]);
    const double dq = dh[j] * k.o[j];
    dc[j] += cfg.family == Family::mlstm ? dq : dq * (1.0 - k.q[j] * k.q[j]);
  }
  if (cfg.peephole) {
    const auto p_o = params[Slot::p_o].values();
    auto g_po = grads[Slot::p_o].values();
    for (std::size_t j = 0; j < n; ++j) {
      g_po[j] += d_o_pre[j] * k.c[j];
      dc[j] += d_o_pre[j] * p_o[j];
    }
  }

  // c = tanh(c_raw) for mlstm
  Vector dc_raw(dc);
  if (cfg.family == Family::mlstm)
    for (std::size_t j = 0; j < n; ++j) dc_raw[j] *= 1.0 - k.c[j] * k.c[j];

  BackwardResult res;
  res.d_prev = CellState::zeros(n);
  Vector d_i_pre(n), d_f_pre(n), d_g_pre(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double df = dc_raw[j] * k.c_prev[j];
    double di = dc_raw[j] * k.g[j];
    const double dg = dc_raw[j] * k.i[j];
    res.d_prev.c[j] = dc_raw[j] * k.f[j];
    if (cfg.cifg) {
      di -= df;  // f = 1 - i
    } else {
      d_f_pre[j] = df * k.f[j] * (1.0 - k.f[j]);
    }
    d_i_pre[j] = di * k.i[j] * (1.0 - k.i[j]);
    d_g_pre[j] = dg * (1.0 - k.g[j] * k.g[j]);
  }

  if (cfg.peephole) {
    const auto p_i = params[Slot::p_i].values();
    auto g_pi = grads[Slot::p_i].values();
    for (std::size_t j = 0; j < n; ++j) {
      g_pi[j] += d_i_pre[j] * k.c_prev[j];
      res.d_prev.c[j] += d_i_pre[j] * p_i[j];
    }
    if (!cfg.cifg) {
      const auto p_f = params[Slot::p_f].values();
      auto g_pf = grads[Slot::p_f].values();
      for (std::size_t j = 0; j < n; ++j) {
        g_pf[j] += d_f_pre[j] * k.c_prev[j];
        res.d_prev.c[j] += d_f_pre[j] * p_f[j];
      }
    }
  }

  Vector d_gate_in(k.gate_in.size(), 0.0);
  accumulate_gate(params, grads, Slot::W_i, Slot::U_i, Slot::b_i, d_i_pre, k, d_gate_in,
                  res.d_prev.h);
  if (!cfg.cifg) {
    accumulate_gate(params, grads, Slot::W_f, Slot::U_f, Slot::b_f, d_f_pre, k, d_gate_in,
                    res.d_prev.h);
  }
  accumulate_gate(params, grads, Slot::W_g, Slot::U_g, Slot::b_g, d_g_pre, k, d_gate_in,
                  res.d_prev.h);
  accumulate_gate(params, grads, Slot::W_o, Slot::U_o, Slot::b_o, d_o_pre, k, d_gate_in,
                  res.d_prev.h);

  if (cfg.compression) {
    res.d_x.assign(cfg.input_dim, 0.0);
    res.d_x[0] = d_gate_in[0];
    Vector d_comp_pre(k.comp_pre.size());
    for (std::size_t r = 0; r < d_comp_pre.size(); ++r)
      d_comp_pre[r] = k.comp_pre[r] > 0.0 ? d_gate_in[1 + r] : 0.0;
    const auto weather = std::span<const double>(k.x).subspan(1);
    outer_acc(grads[Slot::comp_W], d_comp_pre, weather);
    axpy(1.0, d_comp_pre, grads[Slot::comp_b].values());
    matvec_transposed_acc(params[Slot::comp_W], d_comp_pre,
                          std::span<double>(res.d_x).subspan(1));
  } else {
    res.d_x = std::move(d_gate_in);
  }
  return res;
}

Vector persistence_predict(std::span<const double> series) {
  if (series.size() < 2) {
    throw Error(Errc::insufficient_data, "persistence_predict: need at least 2 points, got " +
                                             std::to_string(series.size()));
  }
  Vector out(series.size());
  out[0] = series[0];
  for (std::size_t i = 1; i < series.size(); ++i) out[i] = series[i - 1];
  return out;
}

}  // namespace gustcast

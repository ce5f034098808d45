#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "gustcast/linalg.hpp"
#include "gustcast/rng.hpp"

namespace gustcast {

enum class Family { generic, mlstm };

std::string_view to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view s) noexcept;

/// Shape and wiring of one recurrent cell.
///
/// The input vector is laid out as [power | weather...]. With compression
/// enabled, the weather part is squeezed through a trained ReLU layer to a
/// single scalar before it reaches the gates, so the gates see two inputs.
struct VariantConfig {
  Family family = Family::mlstm;
  bool cifg = false;
  bool peephole = false;
  bool compression = false;
  std::size_t input_dim = 1;
  std::size_t cell_dim = 8;

  std::size_t compressed_dim() const noexcept { return compression ? 1 : 0; }
  std::size_t weather_dim() const noexcept { return input_dim - 1; }
  /// Width of the vector the gates consume.
  std::size_t gate_input_dim() const noexcept { return compression ? 1 + compressed_dim() : input_dim; }

  /// Throws Errc::invalid_argument on an impossible combination.
  void validate() const;
  /// Short human-readable tag such as "mlstm+cifg+peephole".
  std::string name() const;

  friend bool operator==(const VariantConfig&, const VariantConfig&) = default;
};

enum class Slot : std::size_t {
  W_f, U_f, b_f,
  W_i, U_i, b_i,
  W_o, U_o, b_o,
  W_g, U_g, b_g,
  p_f, p_i, p_o,
  head_W, head_b,
  comp_W, comp_b,
  count
};

inline constexpr std::size_t kSlotCount = static_cast<std::size_t>(Slot::count);

std::string_view slot_name(Slot s) noexcept;
std::optional<Slot> slot_from_name(std::string_view name) noexcept;

/// Required (rows, cols) of a tensor under `cfg`, or nullopt if the variant
/// does not carry it (forget weights under CIFG, peepholes when off, ...).
std::optional<std::pair<std::size_t, std::size_t>> slot_shape(const VariantConfig& cfg, Slot s);

/// All trainable tensors of a cell. Absent tensors are empty matrices.
struct CellParams {
  std::array<Matrix, kSlotCount> tensors;

  Matrix& operator[](Slot s) noexcept { return tensors[static_cast<std::size_t>(s)]; }
  const Matrix& operator[](Slot s) const noexcept { return tensors[static_cast<std::size_t>(s)]; }

  static CellParams zeros(const VariantConfig& cfg);
  /// Glorot-uniform weights, zero biases except forget (1.0) and the ReLU
  /// layers (0.5), glorot peepholes.
  static CellParams init(const VariantConfig& cfg, Rng& rng);

  /// Throws Errc::shape_inconsistency if any tensor disagrees with `cfg`.
  void validate(const VariantConfig& cfg) const;

  std::size_t parameter_count() const noexcept;

  /// this += alpha * other (same layout required).
  void add_scaled(double alpha, const CellParams& other);
  void set_zero() noexcept;
  /// Euclidean norm over every present tensor.
  double norm() const noexcept;
  bool all_finite() const noexcept;

  template <class F>
  void for_each(F&& f) {
    for (std::size_t k = 0; k < kSlotCount; ++k)
      if (!tensors[k].empty()) f(static_cast<Slot>(k), tensors[k]);
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < kSlotCount; ++k)
      if (!tensors[k].empty()) f(static_cast<Slot>(k), tensors[k]);
  }

  friend bool operator==(const CellParams&, const CellParams&) = default;
};

struct CellState {
  Vector c;
  Vector h;

  static CellState zeros(std::size_t cell_dim) { return {Vector(cell_dim, 0.0), Vector(cell_dim, 0.0)}; }
  friend bool operator==(const CellState&, const CellState&) = default;
};

/// Everything the backward pass needs from one forward step.
struct StepCache {
  VariantConfig cfg;
  Vector x;          // raw input
  Vector gate_in;    // what the gates saw (x, or [power, compressed])
  Vector comp_pre;   // compression pre-activation (empty when off)
  Vector c_prev, h_prev;
  Vector i, f, o, g;
  Vector c_raw;      // f*c_prev + i*g
  Vector c;          // new cell (tanh(c_raw) for mlstm)
  Vector q;          // tanh(c) for generic, c for mlstm
  Vector h;
  double head_pre = 0.0;
};

struct StepResult {
  CellState state;
  double prediction = 0.0;
  StepCache cache;
};

/// One recurrent step. Throws on shape mismatch or non-finite input.
StepResult forward_step(const VariantConfig& cfg, const CellParams& params, const CellState& state,
                        std::span<const double> x);

/// relu(comp_W * weather + comp_b). Requires compression to be on.
Vector compress_input(const VariantConfig& cfg, const CellParams& params,
                      std::span<const double> weather);

struct BackwardResult {
  CellState d_prev;  // gradient w.r.t. the incoming (c, h)
  Vector d_x;        // gradient w.r.t. the raw input
};

/// Reverse-mode pass through one step. Parameter gradients are accumulated
/// into `grads`, which must have the layout of CellParams::zeros(cfg).
/// `d_next` is the gradient arriving at this step's output state.
BackwardResult backward_step(const VariantConfig& cfg, const CellParams& params,
                             const StepCache& cache, double d_prediction,
                             const CellState& d_next, CellParams& grads);

/// Persistence baseline: out[i] = series[i-1], out[0] = series[0].
Vector persistence_predict(std::span<const double> series);

}  // namespace gustcast

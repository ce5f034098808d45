#include "gustcast/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "gustcast/error.hpp"
#include "gustcast/simd/kernels.hpp"

namespace gustcast {

namespace {

std::string vec_shape(std::size_t n) { return "vector(" + std::to_string(n) + ")"; }

[[noreturn]] void mismatch(const std::string& op, const std::string& a, const std::string& b) {
  throw Error(Errc::dimension_mismatch, op + ": dimension mismatch between " + a + " and " + b);
}

}  // namespace

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::non_finite: return "non_finite";
    case Errc::parse_error: return "parse_error";
    case Errc::version_mismatch: return "version_mismatch";
    case Errc::shape_inconsistency: return "shape_inconsistency";
    case Errc::missing_field: return "missing_field";
    case Errc::spacing_violation: return "spacing_violation";
    case Errc::non_monotone: return "non_monotone";
    case Errc::out_of_range: return "out_of_range";
    case Errc::coverage_gap: return "coverage_gap";
    case Errc::degenerate_feature: return "degenerate_feature";
    case Errc::no_convergence: return "no_convergence";
    case Errc::insufficient_data: return "insufficient_data";
    case Errc::divergence: return "divergence";
    case Errc::config_error: return "config_error";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(Errc::dimension_mismatch, "Matrix: " + std::to_string(data_.size()) +
                                              " values cannot fill " + shape_string());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> v) {
  return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

std::string Matrix::shape_string() const {
  return "matrix(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

Vector matvec(const Matrix& m, std::span<const double> v) {
  Vector out(m.rows(), 0.0);
  matvec_acc(m, v, out);
  return out;
}

void matvec_acc(const Matrix& m, std::span<const double> v, std::span<double> out) {
  if (v.size() != m.cols()) mismatch("matvec", m.shape_string(), vec_shape(v.size()));
  if (out.size() != m.rows()) mismatch("matvec", m.shape_string(), vec_shape(out.size()));
  if (m.empty()) return;
  simd::active().gemv_acc(m.values().data(), m.rows(), m.cols(), v.data(), out.data());
}

void matvec_transposed_acc(const Matrix& m, std::span<const double> v, std::span<double> out) {
  if (v.size() != m.rows()) mismatch("matvec_transposed", m.shape_string(), vec_shape(v.size()));
  if (out.size() != m.cols()) mismatch("matvec_transposed", m.shape_string(), vec_shape(out.size()));
  const auto& k = simd::active();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (v[r] != 0.0) k.axpy(v[r], m.row(r).data(), out.data(), m.cols());
  }
}

void outer_acc(Matrix& g, std::span<const double> u, std::span<const double> w) {
  if (u.size() != g.rows() || w.size() != g.cols()) {
    mismatch("outer", g.shape_string(), vec_shape(u.size()) + " x " + vec_shape(w.size()));
  }
  const auto& k = simd::active();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    if (u[r] != 0.0) k.axpy(u[r], w.data(), g.row(r).data(), g.cols());
  }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) mismatch("axpy", vec_shape(x.size()), vec_shape(y.size()));
  simd::active().axpy(alpha, x.data(), y.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) mismatch("dot", vec_shape(a.size()), vec_shape(b.size()));
  return simd::active().dot(a.data(), b.data(), a.size());
}

Matrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) {
    throw Error(Errc::invalid_argument, "glorot_init: zero dimension " + std::to_string(rows) +
                                            "x" + std::to_string(cols));
  }
  const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (double& x : m.values()) x = rng.uniform(-s, s);
  return m;
}

double activate(Activation op, double x) noexcept {
  switch (op) {
    case Activation::sigmoid:
      // Split by sign so exp never overflows.
      if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
      else {
        const double e = std::exp(x);
        return e / (1.0 + e);
      }
    case Activation::tanh: return std::tanh(x);
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::one_minus: return 1.0 - x;
  }
  return x;
}

Vector elementwise(Activation op, std::span<const double> v) {
  Vector out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [op](double x) { return activate(op, x); });
  return out;
}

bool all_finite(std::span<const double> v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace gustcast

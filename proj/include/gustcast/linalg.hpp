#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gustcast/rng.hpp"

namespace gustcast {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Vectors that live inside parameter
/// sets (biases, peepholes) are stored as n x 1 matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// m * v. Throws Errc::dimension_mismatch naming both shapes.
Vector matvec(const Matrix& m, std::span<const double> v);

/// out += m * v
void matvec_acc(const Matrix& m, std::span<const double> v, std::span<double> out);

/// out += m^T * v
void matvec_transposed_acc(const Matrix& m, std::span<const double> v, std::span<double> out);

/// g += u * w^T
void outer_acc(Matrix& g, std::span<const double> u, std::span<const double> w);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);

/// Glorot/Xavier uniform: entries ~ U[-s, s], s = sqrt(6 / (rows + cols)).
Matrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng);

enum class Activation { sigmoid, tanh, relu, one_minus };

double activate(Activation op, double x) noexcept;
Vector elementwise(Activation op, std::span<const double> v);

bool all_finite(std::span<const double> v) noexcept;

}  // namespace gustcast

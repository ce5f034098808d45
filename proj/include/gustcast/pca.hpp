#pragma once

#include <cstddef>
#include <span>

#include "gustcast/linalg.hpp"

namespace gustcast {

struct PCAModel {
  Vector mean;
  Vector component;  // unit length
  double eigenvalue = 0.0;
  double variance_fraction = 0.0;
  std::size_t iterations = 0;
};

struct PowerIterationOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10000;
};

/// Sample covariance (n-1 denominator) of the rows of `x`.
Matrix covariance(const Matrix& x, Vector* mean_out = nullptr);

/// Leading eigenpair of a symmetric positive semi-definite matrix by power
/// iteration. Throws Errc::no_convergence with the iteration count.
std::pair<double, Vector> leading_eigenpair(const Matrix& sym, const PowerIterationOptions& opt = {},
                                            std::size_t* iterations = nullptr);

/// First principal component of the rows of `x` (needs >= 2 rows).
PCAModel pca_fit(const Matrix& x, const PowerIterationOptions& opt = {});

double pca_project(const PCAModel& model, std::span<const double> v);

}  // namespace gustcast

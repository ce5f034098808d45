#include "gustcast/pca.hpp"

#include <algorithm>
#include <cmath>

#include "gustcast/error.hpp"

namespace gustcast {

Matrix covariance(const Matrix& x, Vector* mean_out) {
  const std::size_t n = x.rows(), d = x.cols();
  if (n < 2) throw Error(Errc::insufficient_data, "covariance: need at least 2 rows");
  Vector mean(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) axpy(1.0, x.row(r), mean);
  for (double& m : mean) m /= static_cast<double>(n);

  Matrix cov(d, d);
  Vector centered(d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) centered[c] = x(r, c) - mean[c];
    outer_acc(cov, centered, centered);
  }
  for (double& v : cov.values()) v /= static_cast<double>(n - 1);
  if (mean_out) *mean_out = std::move(mean);
  return cov;
}

std::pair<double, Vector> leading_eigenpair(const Matrix& a, const PowerIterationOptions& opt,
                                            std::size_t* iterations) {
  const std::size_t d = a.rows();
  if (d == 0 || a.cols() != d) throw Error(Errc::dimension_mismatch, "leading_eigenpair: " + a.shape_string());

  // Start from the heaviest column; it has a component along the leading
  // eigenvector unless the matrix is zero.
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t c = 0; c < d; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < d; ++r) s += a(r, c) * a(r, c);
    if (s > best_norm) best_norm = s, best = c;
  }
  Vector v(d);
  for (std::size_t r = 0; r < d; ++r) v[r] = a(r, best);
  double norm = std::sqrt(best_norm);
  if (!(norm > 0.0)) throw Error(Errc::degenerate_feature, "leading_eigenpair: zero matrix");
  for (double& x : v) x /= norm;

  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    Vector next = matvec(a, v);
    norm = std::sqrt(dot(next, next));
    if (!(norm > 0.0)) throw Error(Errc::degenerate_feature, "leading_eigenpair: iterate vanished");
    double change = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      next[r] /= norm;
      change = std::max(change, std::abs(next[r] - v[r]));
    }
    v = std::move(next);
    if (change < opt.tolerance) {
      if (iterations) *iterations = it;
      const Vector av = matvec(a, v);
      return {dot(v, av), v};
    }
  }
  throw Error(Errc::no_convergence, "leading_eigenpair: no convergence after " +
                                        std::to_string(opt.max_iterations) + " iterations");
}

PCAModel pca_fit(const Matrix& x, const PowerIterationOptions& opt) {
  PCAModel m;
  const Matrix cov = covariance(x, &m.mean);
  auto [lambda, v] = leading_eigenpair(cov, opt, &m.iterations);
  // Sign convention: largest-magnitude entry positive.
  std::size_t arg = 0;
  for (std::size_t r = 1; r < v.size(); ++r)
    if (std::abs(v[r]) > std::abs(v[arg])) arg = r;
  if (v[arg] < 0.0)
    for (double& c : v) c = -c;
  double trace = 0.0;
  for (std::size_t r = 0; r < cov.rows(); ++r) trace += cov(r, r);
  m.component = std::move(v);
  m.eigenvalue = lambda;
  m.variance_fraction = trace > 0.0 ? std::clamp(lambda / trace, 0.0, 1.0) : 0.0;
  return m;
}

double pca_project(const PCAModel& model, std::span<const double> v) {
  if (v.size() != model.mean.size()) {
    throw Error(Errc::dimension_mismatch, "pca_project: model has " +
                                              std::to_string(model.mean.size()) +
                                              " features, vector has " + std::to_string(v.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += model.component[i] * (v[i] - model.mean[i]);
  return s;
}

}  // namespace gustcast

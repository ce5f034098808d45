#include <doctest.h>

#include <cmath>

#include "gustcast/error.hpp"
#include "gustcast/features.hpp"
#include "gustcast/pca.hpp"
#include "gustcast/rng.hpp"
#include "oracles/jacobi.hpp"

using namespace gustcast;

namespace {

double norm2(const Vector& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Correlated 5-D cloud: x = A z with random A.
Matrix random_cloud(std::uint64_t seed, std::size_t n, std::size_t d) {
  Rng rng(seed);
  Matrix a(d, d);
  for (double& v : a.values()) v = rng.normal();
  Matrix x(n, d);
  Vector z(d);
  for (std::size_t r = 0; r < n; ++r) {
    for (double& v : z) v = rng.normal();
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0;
      for (std::size_t k = 0; k < d; ++k) s += a(i, k) * z[k];
      x(r, i) = s + 3.0 * static_cast<double>(i);
    }
  }
  return x;
}

}  // namespace

TEST_CASE("collinear points give a rank-one component") {
  Matrix x(6, 2);
  for (std::size_t r = 0; r < 6; ++r) x(r, 0) = x(r, 1) = static_cast<double>(r) * 1.5 - 2.0;
  auto m = pca_fit(x);
  CHECK(std::abs(std::abs(m.component[0]) - 1.0 / std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(std::abs(m.component[1]) - 1.0 / std::sqrt(2.0)) < 1e-10);
  CHECK(m.variance_fraction == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("isotropic cloud splits variance evenly") {
  Rng rng(10);
  Matrix x(10000, 2);
  for (double& v : x.values()) v = rng.normal();
  auto m = pca_fit(x, {1e-10, 100000});
  CHECK(std::abs(m.variance_fraction - 0.5) < 0.05);
}

TEST_CASE("covariance uses the n-1 denominator") {
  Matrix x(3, 2, {1, 2, 2, 4, 3, 9});
  Vector mean;
  auto c = covariance(x, &mean);
  CHECK(mean == Vector{2, 5});
  CHECK(c(0, 0) == 1.0);
  CHECK(c(0, 1) == 3.5);
  CHECK(c(1, 0) == 3.5);
  CHECK(c(1, 1) == 13.0);
}

TEST_CASE("leading component matches a Jacobi decomposition") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto x = random_cloud(seed, 200, 5);
    auto cov = covariance(x);
    std::vector<std::vector<double>> a(5, std::vector<double>(5));
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) a[i][j] = cov(i, j);
    auto ref = oracle::jacobi_eigen(a);
    auto m = pca_fit(x);
    CAPTURE(seed);
    CHECK(std::abs(norm2(m.component) - 1.0) < 1e-10);
    const double sign = (m.component[0] * ref.vectors[0][0] >= 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(m.component[i] - sign * ref.vectors[0][i]) < 1e-8);
    CHECK(m.eigenvalue == doctest::Approx(ref.values[0]).epsilon(1e-10));
    double trace = 0;
    for (double l : ref.values) trace += l;
    CHECK(m.variance_fraction == doctest::Approx(ref.values[0] / trace).epsilon(1e-10));
    CHECK((m.variance_fraction >= 0.0 && m.variance_fraction <= 1.0));
  }
}

TEST_CASE("projection of the mean is zero") {
  auto x = random_cloud(3, 50, 4);
  auto m = pca_fit(x);
  CHECK(std::abs(pca_project(m, m.mean)) < 1e-12);
  CHECK_THROWS_AS(pca_project(m, Vector{1, 2}), Error);
}

TEST_CASE("power iteration reports non-convergence") {
  // eigenvalues 1 and 0.999 along directions rotated by 0.5 rad
  const double c = std::cos(0.5), sn = std::sin(0.5);
  Matrix sym(2, 2, {c * c + 0.999 * sn * sn, (1 - 0.999) * c * sn, (1 - 0.999) * c * sn,
                    sn * sn + 0.999 * c * c});
  try {
    leading_eigenpair(sym, {1e-10, 3});
    FAIL("expected no_convergence");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_convergence);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  CHECK_THROWS_AS(pca_fit(Matrix(1, 3)), Error);
}

TEST_CASE("feature preparation fits on training rows only") {
  auto d = synth_generate(3, 2400);
  auto ds = align(d.power, d.weather);
  Split s{1500, 1900, ds.size()};
  for (auto mode : {FeatureMode::power_only, FeatureMode::direct, FeatureMode::pca}) {
    auto md = prepare(ds, mode, s);
    CHECK(md.input_dim() == input_dim_for(mode));
    CHECK(mode_for_input_dim(md.input_dim()) == mode);
    CHECK(md.rows() == ds.size());
    CHECK(md.pca.has_value() == (mode == FeatureMode::pca));
    for (std::size_t r = 0; r < md.rows(); ++r) {
      CHECK(md.power_to_mw(md.targets[r]) == doctest::Approx(ds.target_mw[r]).epsilon(1e-12));
      CHECK(md.inputs(r, 0) == md.norm.apply(ds.power_mw[r], 0));
    }
  }
  auto pca = prepare(ds, FeatureMode::pca, s);
  CHECK(pca.pca->variance_fraction > 0.5);
  CHECK_FALSE(mode_for_input_dim(7).has_value());
}

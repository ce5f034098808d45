#include <doctest.h>

#include <cmath>

#include "gustcast/error.hpp"
#include "gustcast/linalg.hpp"
#include "gustcast/rng.hpp"

using namespace gustcast;

TEST_CASE("matvec small products") {
  CHECK(matvec(Matrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});
  CHECK(matvec(Matrix(2, 3), Vector{5, 5, 5}) == Vector{0, 0});
  CHECK(matvec(Matrix(2, 2, {1, 2, 3, 4}), Vector{1, 1}) == Vector{3, 7});
}

TEST_CASE("matvec shape mismatch names both shapes") {
  try {
    matvec(Matrix(2, 3), Vector{1, 2});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
    const std::string msg = e.what();
    CHECK(msg.find("2x3") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
  }
}

TEST_CASE("matvec is linear") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = static_cast<std::size_t>(rng.uniform_int(1, 7));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 9));
    Matrix m(r, c);
    for (double& v : m.values()) v = rng.normal();
    Vector u(c), w(c), mix(c);
    const double a = rng.normal(), b = rng.normal();
    for (std::size_t k = 0; k < c; ++k) {
      u[k] = rng.normal();
      w[k] = rng.normal();
      mix[k] = a * u[k] + b * w[k];
    }
    const Vector lhs = matvec(m, mix);
    const Vector mu = matvec(m, u), mw = matvec(m, w);
    for (std::size_t k = 0; k < r; ++k) {
      const double rhs = a * mu[k] + b * mw[k];
      const double scale = std::max({std::abs(lhs[k]), std::abs(rhs), 1.0});
      CHECK(std::abs(lhs[k] - rhs) / scale < 1e-12);
    }
  }
}

TEST_CASE("transposed product and outer accumulation agree with loops") {
  Rng rng(3);
  Matrix m(3, 5);
  for (double& v : m.values()) v = rng.normal();
  Vector v3{0.5, -1.0, 2.0};
  Vector out(5, 1.0);
  matvec_transposed_acc(m, v3, out);
  for (std::size_t c = 0; c < 5; ++c) {
    double s = 1.0;
    for (std::size_t r = 0; r < 3; ++r) s += m(r, c) * v3[r];
    CHECK(out[c] == doctest::Approx(s).epsilon(1e-14));
  }
  Matrix g(3, 5);
  Vector w5{1, 2, 3, 4, 5};
  outer_acc(g, v3, w5);
  outer_acc(g, v3, w5);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 5; ++c) CHECK(g(r, c) == 2.0 * v3[r] * w5[c]);
}

TEST_CASE("glorot bounds, determinism and mean") {
  Rng a(7);
  Matrix one = glorot_init(1, 1, a);
  CHECK(std::abs(one(0, 0)) <= std::sqrt(3.0));

  Rng r1(1), r2(1);
  CHECK(glorot_init(4, 4, r1) == glorot_init(4, 4, r2));

  Rng r3(5);
  Matrix big = glorot_init(10, 10, r3);
  double sum = 0.0;
  const double s = std::sqrt(6.0 / 20.0);
  for (double v : big.values()) {
    CHECK(std::abs(v) <= s);
    sum += v;
  }
  CHECK(std::abs(sum / 100.0) < 0.1);

  Rng r4(1);
  CHECK_THROWS_AS(glorot_init(0, 3, r4), Error);
}

TEST_CASE("elementwise activations") {
  CHECK(elementwise(Activation::sigmoid, Vector{0}) == Vector{0.5});
  CHECK(elementwise(Activation::relu, Vector{-3, 2}) == Vector{0, 2});
  CHECK(elementwise(Activation::one_minus, Vector{0.3})[0] == doctest::Approx(0.7).epsilon(1e-15));
  Rng rng(9);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.normal(0.0, 10.0);
    const double t = activate(Activation::tanh, x);
    CHECK(activate(Activation::relu, x) >= 0.0);
    if (std::abs(x) < 18.0) CHECK((t > -1.0 && t < 1.0));
  }
}

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs |= x != c.next();
  }
  CHECK(differs);
  Rng u(1);
  for (int k = 0; k < 10000; ++k) {
    const auto v = u.uniform_int(-2, 3);
    CHECK((v >= -2 && v <= 3));
    const double f = u.uniform();
    CHECK((f >= 0.0 && f < 1.0));
  }
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("rng normal moments") {
  Rng rng(123);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

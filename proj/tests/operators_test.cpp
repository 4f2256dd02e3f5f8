#include "fpaccel/operators.hpp"

#include "fpaccel/rng.hpp"
#include "fpaccel/theory.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace fpaccel;
using testsupport::random_vector;
using testsupport::vec;

TEST_CASE("diagonal operator evaluates W x + a") {
  const auto zero = make_diag_operator(vec({0.0}), vec({0.0}));
  CHECK(zero.evaluate(vec({7.0}))(0) == 0.0);

  const auto op = make_diag_operator(vec({-0.07, 0.62, -0.55, -0.6, 0.15}), Vector::Zero(5));
  const auto s = spectrum_of(op.matrix());
  CHECK(s.lambda_min == doctest::Approx(-0.6));
  CHECK(s.lambda_max == doctest::Approx(0.62));
  CHECK(s.op_norm == doctest::Approx(0.62));

  const auto balanced = make_diag_operator(vec({0.5, -0.5}), Vector::Zero(2));
  const auto bs = spectrum_of(balanced.matrix());
  CHECK(bs.lambda_max == doctest::Approx(-bs.lambda_min));
}

TEST_CASE("asymmetric matrices are rejected") {
  Matrix W = Matrix::Zero(2, 2);
  W(0, 1) = 1e-3;
  CHECK_THROWS_AS(LinearSymmetricOperator(W, Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("random symmetric construction hits the requested spectrum") {
  const auto tiny = make_random_symmetric(1, 0.3, 0.3, std::nullopt, 5);
  CHECK(tiny.matrix()(0, 0) == doctest::Approx(0.3).epsilon(1e-15));

  const auto op = make_random_symmetric(40, -0.8, 0.8, -0.9, 123);
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  CHECK(std::abs(es.eigenvalues()(0) - (-0.9)) <= 1e-10);
  CHECK(es.eigenvalues()(39) <= 0.8 + 1e-10);

  const auto big = make_random_symmetric(500, -0.9, 0.9, -0.95, 31);
  CHECK(spectrum_of(big.matrix()).op_norm == doctest::Approx(0.95).epsilon(1e-9));
}

TEST_CASE("construction is deterministic in the seed") {
  const auto a = make_random_symmetric(30, -0.5, 0.5, std::nullopt, 99);
  const auto b = make_random_symmetric(30, -0.5, 0.5, std::nullopt, 99);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const auto c = make_random_symmetric(30, -0.5, 0.5, std::nullopt, 100);
  CHECK((a.matrix() - c.matrix()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("requested eigenvalues are reproduced to tolerance") {
  SplitMix64 g(7);
  const auto op = make_random_symmetric(25, -0.7, 0.2, std::nullopt, 7);
  // Reconstruct the sampled spectrum with the same stream prefix.
  Vector expected(25);
  for (int i = 0; i < 25; ++i) expected(i) = -0.7 + 0.9 * g.next_double();
  std::sort(expected.begin(), expected.end());

  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  for (int i = 0; i < 25; ++i) CHECK(std::abs(es.eigenvalues()(i) - expected(i)) <= 1e-10);
}

TEST_CASE("evaluation is affine in the input") {
  const auto op = make_random_symmetric(12, -0.6, 0.6, std::nullopt, 2024);
  SplitMix64 g(1);
  const Vector x = random_vector(g, 12), y = random_vector(g, 12);
  const Vector lhs = op.evaluate(x + y) - op.offset();
  const Vector rhs = (op.evaluate(x) - op.offset()) + (op.evaluate(y) - op.offset());
  CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
}

TEST_CASE("invalid spectra are rejected") {
  CHECK_THROWS_AS(make_random_symmetric(4, -1.2, 0.5, std::nullopt, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_random_symmetric(4, 0.5, 0.2, std::nullopt, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_random_symmetric(4, -0.5, 0.5, -0.2, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_random_symmetric(4, -0.5, 0.5, -1.0, 1), std::invalid_argument);
}

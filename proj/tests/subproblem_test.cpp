#include "fpaccel/anderson.hpp"
#include "fpaccel/errors.hpp"
#include "fpaccel/rng.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace fpaccel;
using testsupport::random_vector;
using testsupport::vec;

namespace {

double combo_norm(const std::vector<Vector>& fs, const Vector& alpha) {
  Vector c = Vector::Zero(fs.front().size());
  for (std::size_t i = 0; i < fs.size(); ++i) c += alpha(static_cast<Index>(i)) * fs[i];
  return c.norm();
}

}  // namespace

TEST_CASE("single residual forces the unit coefficient") {
  const std::vector<Vector> fs = {vec({1.0, 2.0})};
  const auto r = aa_solve_subproblem(fs, kUnbounded, 1e-12);
  REQUIRE(r.coefficients.size() == 1);
  CHECK(r.coefficients(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.objective == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("orthonormal pair splits evenly") {
  const std::vector<Vector> fs = {vec({1.0, 0.0}), vec({0.0, 1.0})};
  const auto r = aa_solve_subproblem(fs, kUnbounded, 1e-12);
  CHECK(r.coefficients(0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r.coefficients(1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r.objective == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("coefficient box clips the collinear optimum") {
  // Independent oracle: the objective reduces to |3 - 2 a0| on the feasible
  // interval a0 in [0.4, 0.6]; scan it densely.
  double oracle_obj = std::numeric_limits<double>::infinity();
  double oracle_a0 = 0.0;
  const int steps = 200000;
  for (int i = 0; i <= steps; ++i) {
    const double a0 = 0.4 + 0.2 * i / steps;
    const double obj = std::abs(3.0 - 2.0 * a0);
    if (obj < oracle_obj) {
      oracle_obj = obj;
      oracle_a0 = a0;
    }
  }
  CHECK(oracle_obj == doctest::Approx(1.8).epsilon(1e-9));
  CHECK(oracle_a0 == doctest::Approx(0.6).epsilon(1e-9));

  const std::vector<Vector> fs = {vec({1.0, 0.0}), vec({3.0, 0.0})};
  const auto r = aa_solve_subproblem(fs, 0.6, 1e-12);
  CHECK(r.coefficients(0) == doctest::Approx(oracle_a0).epsilon(1e-12));
  CHECK(r.coefficients(1) == doctest::Approx(1.0 - oracle_a0).epsilon(1e-12));
  CHECK(r.objective == doctest::Approx(oracle_obj).epsilon(1e-12));

  // The unconstrained optimum violates the box and has a smaller objective.
  const auto unbounded = aa_solve_subproblem(fs, kUnbounded, 1e-12);
  CHECK(unbounded.objective < r.objective);
  CHECK(std::abs(unbounded.coefficients.cwiseAbs().maxCoeff()) > 0.6);
}

TEST_CASE("too tight a box is infeasible") {
  const std::vector<Vector> fs = {vec({1.0, 0.0}), vec({0.0, 1.0}), vec({1.0, 1.0})};
  CHECK_THROWS_AS(aa_solve_subproblem(fs, 0.2, 1e-12), InfeasibleError);
  CHECK_NOTHROW(aa_solve_subproblem(fs, 1.0 / 3.0, 1e-12));
}

TEST_CASE("a box at exactly 1/L leaves only the uniform point") {
  const std::vector<Vector> fs = {vec({1.0, -2.0}), vec({0.5, 3.0})};
  const auto r = aa_solve_subproblem(fs, 0.5, 1e-12);
  CHECK(r.coefficients(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.coefficients(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("all-zero residual window selects the newest entry") {
  const std::vector<Vector> fs = {Vector::Zero(3), Vector::Zero(3), Vector::Zero(3)};
  const auto r = aa_solve_subproblem(fs, kUnbounded, 1e-12);
  CHECK(r.coefficients(0) == 0.0);
  CHECK(r.coefficients(1) == 0.0);
  CHECK(r.coefficients(2) == 1.0);
  CHECK(r.objective == 0.0);

  const auto bounded = aa_solve_subproblem(fs, 2.0, 1e-12);
  CHECK(bounded.coefficients(2) == 1.0);
}

TEST_CASE("coefficients sum to one and respect the box") {
  SplitMix64 g(20240811);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + static_cast<Index>(g.next_u64() % 6);
    const int L = 1 + static_cast<int>(g.next_u64() % 4);
    std::vector<Vector> fs;
    for (int i = 0; i < L; ++i) fs.push_back(random_vector(g, n));

    const bool bounded = trial % 2 == 0;
    const double c0 = bounded ? 0.6 + g.next_double() * 2.0 : kUnbounded;
    if (bounded && c0 < 1.0 / L) continue;

    const auto r = aa_solve_subproblem(fs, c0, 1e-12);
    CHECK(std::abs(r.coefficients.sum() - 1.0) <= 1e-12);
    if (bounded) CHECK(r.coefficients.cwiseAbs().maxCoeff() <= c0 + 1e-12);

    // No worsening at the subproblem level: the newest vertex is feasible
    // whenever the box admits unit coefficients.
    if (!bounded || c0 >= 1.0) {
      CHECK(r.objective <= fs.back().norm() + 1e-12);
      for (const auto& f : fs) CHECK(r.objective <= f.norm() + 1e-12);
    }
    CHECK(combo_norm(fs, r.coefficients) == doctest::Approx(r.objective).epsilon(1e-12));
  }
}

TEST_CASE("inactive box reproduces the unconstrained solution") {
  SplitMix64 g(77);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = 3 + static_cast<Index>(g.next_u64() % 5);
    const int L = 2 + static_cast<int>(g.next_u64() % 3);
    std::vector<Vector> fs;
    for (int i = 0; i < L; ++i) fs.push_back(random_vector(g, n));

    const auto unbounded = aa_solve_subproblem(fs, kUnbounded, 1e-12);
    const double c0 = unbounded.coefficients.cwiseAbs().maxCoeff() * 2.0 + 1.0;
    const auto bounded = aa_solve_subproblem(fs, c0, 1e-12);
    CHECK((bounded.coefficients - unbounded.coefficients).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(bounded.objective == doctest::Approx(unbounded.objective).epsilon(1e-10));
  }
}

TEST_CASE("box solver matches a dense feasible-set scan") {
  SplitMix64 g(4242);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Vector> fs;
    for (int i = 0; i < 3; ++i) fs.push_back(random_vector(g, 4));
    const double c0 = 0.5 + 0.4 * g.next_double();

    const int grid = 220;
    double oracle = std::numeric_limits<double>::infinity();
    Vector alpha(3);
    for (int i = 0; i <= grid; ++i) {
      alpha(0) = -c0 + 2.0 * c0 * i / grid;
      for (int j = 0; j <= grid; ++j) {
        alpha(1) = -c0 + 2.0 * c0 * j / grid;
        alpha(2) = 1.0 - alpha(0) - alpha(1);
        if (std::abs(alpha(2)) > c0) continue;
        oracle = std::min(oracle, combo_norm(fs, alpha));
      }
    }

    const auto r = aa_solve_subproblem(fs, c0, 1e-12);
    CHECK(r.objective <= oracle + 1e-12);  // the scan can only overshoot
    CHECK(oracle - r.objective <= 0.05);   // and not by more than its resolution
  }
}

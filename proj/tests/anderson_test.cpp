#include "fpaccel/anderson.hpp"

#include "fpaccel/errors.hpp"
#include "fpaccel/operators.hpp"
#include "fpaccel/rng.hpp"
#include "fpaccel/theory.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <vector>

using namespace fpaccel;
using testsupport::random_vector;
using testsupport::vec;

namespace {

const Vector kW1Diagonal = vec({-0.07, 0.62, -0.55, -0.6, 0.15});

AAConfig basic_config(int m) {
  AAConfig cfg;
  cfg.depth = m;
  cfg.max_iterations = 2000;
  return cfg;
}

}  // namespace

TEST_CASE("plain iteration contracts a scalar problem at the map rate") {
  const FunctionOperator q(1, [](const Vector& x) { return Vector(0.5 * x); });
  const auto trace = fp_iterate(q, vec({1.0}), 1e-12, 200);
  CHECK(trace.reason == TerminationReason::converged);
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    CHECK(trace.records[k].iterate(0) ==
          doctest::Approx(std::pow(0.5, static_cast<double>(k))).epsilon(1e-13));
    if (k > 0) {
      CHECK(trace.records[k].residual_norm / trace.records[k - 1].residual_norm ==
            doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("plain iteration stops immediately at a fixed point") {
  const FunctionOperator q(2, [](const Vector& x) { return x; });
  const auto trace = fp_iterate(q, vec({3.0, -1.0}), 1e-12, 50);
  CHECK(trace.reason == TerminationReason::converged);
  CHECK(trace.records.size() == 1);
  CHECK(trace.records[0].k == 0);
}

TEST_CASE("non-finite operator output raises diverged with the last finite iterate") {
  const FunctionOperator q(1, [](const Vector& x) { return Vector(x * 1e200); });
  try {
    fp_iterate(q, vec({1.0}), 1e-12, 50);
    FAIL("expected DivergedError");
  } catch (const DivergedError& e) {
    CHECK(e.last_finite_iterate(0) == doctest::Approx(1e200));
    CHECK(std::string(e.what()).find("diverged") != std::string::npos);
  }
}

TEST_CASE("plain iteration on the diagonal benchmark estimates the operator norm") {
  const auto op = make_diag_operator(kW1Diagonal, Vector::Zero(5));
  SplitMix64 g(3);
  const Vector x0 = random_vector(g, 5);
  const auto trace = fp_iterate(op, x0, 1e-12, 5000);
  CHECK(trace.reason == TerminationReason::converged);

  std::vector<double> errors = iterate_error_norms(trace, Vector::Zero(5));
  errors.erase(errors.begin());  // the estimator indexes from iteration 1
  const auto r = estimate_r_factor(errors);
  CHECK(std::abs(r.back() - 0.62) <= 0.01);
}

TEST_CASE("a singleton window reduces the accelerated step to the operator application") {
  SplitMix64 g(11);
  const Vector x0 = random_vector(g, 4);
  const Vector fx = random_vector(g, 4);

  AAHistory history(3);
  history.push(x0, fx - x0);

  AAConfig cfg = basic_config(2);
  const auto step = aa_step(history, cfg);
  CHECK((step.next - fx).norm() <= 1e-14 * fx.norm());
  CHECK(step.coefficients.size() == 1);
  CHECK(step.coefficients(0) == doctest::Approx(1.0));

  cfg.damping = 0.25;
  const auto damped = aa_step(history, cfg);
  const Vector expected = 0.25 * fx + 0.75 * x0;
  CHECK((damped.next - expected).norm() <= 1e-14 * expected.norm());
}

TEST_CASE("zero damping combines iterates without applying the operator") {
  SplitMix64 g(12);
  AAHistory history(2);
  const Vector x0 = random_vector(g, 3), f0 = random_vector(g, 3);
  const Vector x1 = random_vector(g, 3), f1 = random_vector(g, 3);
  history.push(x0, f0);
  history.push(x1, f1);

  AAConfig cfg = basic_config(1);
  cfg.damping = 0.0;
  const auto step = aa_step(history, cfg);
  const Vector expected = step.coefficients(0) * x0 + step.coefficients(1) * x1;
  CHECK((step.next - expected).norm() <= 1e-13 * (1.0 + expected.norm()));
}

TEST_CASE("the accelerated update commutes with a linear map") {
  SplitMix64 g(13);
  const auto op = make_random_symmetric(5, -0.8, 0.8, std::nullopt, 99);
  const Matrix& W = op.matrix();

  AAHistory history(2);
  Vector x = random_vector(g, 5);
  history.push(x, op.evaluate(x) - x);
  x = random_vector(g, 5);
  history.push(x, op.evaluate(x) - x);

  const auto step = aa_step(history, basic_config(1));
  Vector combined = step.coefficients(0) * history.iterates()[0] +
                    step.coefficients(1) * history.iterates()[1];
  CHECK((step.next - W * combined).norm() <= 1e-12 * (1.0 + step.next.norm()));
}

TEST_CASE("damped updates equal undamped updates of the blended operator") {
  SplitMix64 g(14);
  const auto op = make_random_symmetric(6, -0.7, 0.7, std::nullopt, 5);
  const double beta = 0.7;
  const Matrix blended_w = beta * op.matrix() + (1.0 - beta) * Matrix::Identity(6, 6);
  const LinearSymmetricOperator blended(blended_w, Vector::Zero(6));

  AAHistory damped_history(3);
  AAHistory blended_history(3);
  for (int i = 0; i < 3; ++i) {
    const Vector x = random_vector(g, 6);
    damped_history.push(x, op.evaluate(x) - x);
    blended_history.push(x, blended.evaluate(x) - x);
  }

  AAConfig damped_cfg = basic_config(2);
  damped_cfg.damping = beta;
  AAConfig undamped_cfg = basic_config(2);

  const auto a = aa_step(damped_history, damped_cfg);
  const auto b = aa_step(blended_history, undamped_cfg);
  CHECK((a.next - b.next).norm() <= 1e-12 * (1.0 + b.next.norm()));
  CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("depth-1 acceleration degenerates to the map rate on the sign-symmetric spectrum") {
  // Residual-space start [u, v] with (1-w)u^2 = (1+w)v^2 keeps the window
  // orthogonal to its newest entry, so each step is a bare map application.
  const double w = 0.5;
  const auto op = make_diag_operator(vec({w, -w}), Vector::Zero(2));
  const Vector xtilde0 = vec({std::sqrt(3.0), 1.0});
  const Matrix w_minus_i = op.matrix() - Matrix::Identity(2, 2);
  const Vector x0 = w_minus_i.partialPivLu().solve(xtilde0);

  AAConfig cfg = basic_config(1);
  cfg.max_iterations = 60;
  cfg.residual_tol = 1e-13;
  const auto trace = aa_solve(op, x0, cfg);
  REQUIRE(trace.records.size() >= 30);
  for (std::size_t k = 1; k < 30; ++k) {
    CHECK(trace.records[k].residual_norm / trace.records[k - 1].residual_norm ==
          doctest::Approx(w).epsilon(1e-10));
  }
}

TEST_CASE("accelerated solve stops at iteration zero on a fixed point") {
  const auto op = make_diag_operator(vec({0.3, -0.2}), vec({1.0, 2.0}));
  const Vector x_star = (Matrix::Identity(2, 2) - op.matrix()).lu().solve(op.offset());
  const auto trace = aa_solve(op, x_star, basic_config(2));
  CHECK(trace.reason == TerminationReason::converged);
  CHECK(trace.records.size() == 1);
}

TEST_CASE("window length follows min(m, k) + 1 and coefficients stay on the simplex") {
  const auto op = make_diag_operator(kW1Diagonal, Vector::Zero(5));
  SplitMix64 g(8);
  const Vector x0 = random_vector(g, 5);

  for (int m : {1, 2, 3}) {
    const auto trace = aa_solve(op, x0, basic_config(m));
    CHECK(trace.reason == TerminationReason::converged);
    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
      const auto& coeffs = trace.records[k].coefficients;
      REQUIRE(coeffs.size() > 0);
      CHECK(coeffs.size() == std::min<Index>(m, static_cast<Index>(k)) + 1);
      CHECK(std::abs(coeffs.sum() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("solver configuration is validated") {
  AAConfig cfg;
  cfg.depth = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AAConfig{};
  cfg.damping = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AAConfig{};
  cfg.damping = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AAConfig{};
  cfg.residual_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AAConfig{};
  cfg.svd_cutoff = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_NOTHROW(AAConfig{}.validate());
}

TEST_CASE("an infeasible coefficient box surfaces from the solve") {
  const auto op = make_diag_operator(vec({0.5}), Vector::Zero(1));
  AAConfig cfg = basic_config(1);
  cfg.coeff_bound = 0.2;
  CHECK_THROWS_AS(aa_solve(op, vec({1.0}), cfg), InfeasibleError);
}

TEST_CASE("a residual floor with no reachable fixed point is reported as stagnated") {
  // Contraction plus a sign-discontinuous kick sized so both candidate roots
  // land in contradicting sign cells; the residual plateaus near the kick.
  const double omega = 1e9;
  const double c = 3.0 * 3.14159265358979323846 / (2.0 * 10.0 * omega);
  const FunctionOperator q(1, [=](const Vector& x) {
    const double s = std::sin(omega * x(0)) >= 0.0 ? 1.0 : -1.0;
    return Vector(Vector::Constant(1, 0.9 * x(0) + c * s));
  });
  AAConfig cfg = basic_config(1);
  cfg.residual_tol = 1e-11;
  cfg.max_iterations = 200000;
  const auto trace = aa_solve(q, vec({1e-2}), cfg);
  CHECK(trace.reason == TerminationReason::stagnated);
  CHECK(trace.records.size() < 1000);
  CHECK(trace.final_residual() > cfg.residual_tol);
}

TEST_CASE("residual-space process on the zero map collapses in one step") {
  const Matrix W = Matrix::Zero(3, 3);
  SplitMix64 g(20);
  const auto norms = reformulated_aa_linear(W, random_vector(g, 3), random_vector(g, 3), 1, 3);
  REQUIRE(norms.size() == 5);
  CHECK(norms[2] == 0.0);
  CHECK(norms[3] == 0.0);
}

TEST_CASE("residual-space process rejects asymmetric maps") {
  Matrix W = Matrix::Zero(2, 2);
  W(0, 1) = 0.5;
  CHECK_THROWS_WITH_AS(reformulated_aa_linear(W, vec({1.0, 0.0}), vec({0.0, 1.0}), 1, 2),
                       "not symmetric", Error);
}

TEST_CASE("residual-space process reproduces the solver residual norms") {
  for (int m : {1, 2, 3}) {
    for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
      const auto op = make_random_symmetric(5, -0.85, 0.85, std::nullopt, seed);
      SplitMix64 g(seed * 31 + 7);
      const Vector x0 = random_vector(g, 5);

      AAConfig cfg = basic_config(m);
      cfg.residual_tol = 1e-300;
      cfg.max_iterations = 50;
      const auto trace = aa_solve(op, x0, cfg);
      REQUIRE(trace.records.size() == 51);

      const Matrix w_minus_i = op.matrix() - Matrix::Identity(5, 5);
      const Vector xtilde0 = w_minus_i * x0;
      const Vector xtilde1 = op.matrix() * xtilde0;
      const auto norms = reformulated_aa_linear(op.matrix(), xtilde0, xtilde1, m, 49);
      REQUIRE(norms.size() == 51);
      for (std::size_t k = 0; k < norms.size(); ++k) {
        CHECK(std::abs(norms[k] - trace.records[k].residual_norm) <= 1e-10);
      }
    }
  }
}

TEST_CASE("sign-symmetric counterexample stalls the residual-space process at the map norm") {
  const double w = 0.5;
  const Matrix W = vec({w, -w}).asDiagonal();
  const Vector xtilde0 = vec({std::sqrt(3.0), 1.0});
  const Vector xtilde1 = W * xtilde0;
  const auto norms = reformulated_aa_linear(W, xtilde0, xtilde1, 1, 30);
  for (std::size_t k = 1; k < norms.size(); ++k) {
    CHECK(norms[k] / norms[k - 1] == doctest::Approx(w).epsilon(1e-11));
  }
}

TEST_CASE("two-step improvement holds across random offsets and windows") {
  const auto base = make_diag_operator(kW1Diagonal, Vector::Zero(5));
  const SpectrumSummary spec = spectrum_of(base.matrix());

  int rows_checked = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    SplitMix64 g(seed);
    const Vector a = random_vector(g, 5);
    const LinearSymmetricOperator op(base.matrix(), a);
    const Vector x0 = random_vector(g, 5);

    for (int m : {1, 2, 3}) {
      const auto trace = aa_solve(op, x0, basic_config(m));
      const auto rows = check_pairwise_bound(trace, op.matrix(), a);
      for (const auto& row : rows) {
        CHECK(row.satisfied);
        CHECK(row.rhs == doctest::Approx(spec.w0 * spec.op_norm));
        if (!row.floor) ++rows_checked;
      }
    }
  }
  CHECK(rows_checked > 500);
}

TEST_CASE("two-step improvement holds on random dense operators with offsets") {
  int rows_checked = 0;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto base = make_random_symmetric(7, -0.85, 0.85, std::nullopt, seed);
    SplitMix64 g(seed + 400);
    const LinearSymmetricOperator op(base.matrix(), random_vector(g, 7));
    const Vector x0 = random_vector(g, 7);
    for (int m : {1, 2}) {
      const auto trace = aa_solve(op, x0, basic_config(m));
      for (const auto& row : check_pairwise_bound(trace, op.matrix(), op.offset())) {
        CHECK(row.satisfied);
        if (!row.floor) ++rows_checked;
      }
    }
  }
  CHECK(rows_checked > 300);
}

TEST_CASE("scalar-spectrum operator obeys the closed-form two-step bound") {
  // On 0.3*I every ratio must sit under 0.3 * (0.3 / 1.7).
  const auto op = make_diag_operator(Vector::Constant(5, 0.3), Vector::Zero(5));
  const double rhs = 0.3 * (0.3 / 1.7);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SplitMix64 g(seed);
    const auto trace = aa_solve(op, random_vector(g, 5), basic_config(1));
    for (const auto& row : check_pairwise_bound(trace, op.matrix(), Vector::Zero(5))) {
      CHECK(row.rhs == doctest::Approx(rhs).epsilon(1e-9));
      CHECK(row.satisfied);
    }
  }
}

TEST_CASE("the zero map converges within two iterations for every method") {
  const auto op = make_diag_operator(Vector::Zero(3), Vector::Zero(3));
  SplitMix64 g(5);
  const Vector x0 = random_vector(g, 3);
  const auto plain = fp_iterate(op, x0, 1e-12, 100);
  CHECK(plain.reason == TerminationReason::converged);
  CHECK(plain.iterations() <= 2);
  for (int m : {1, 2, 3}) {
    const auto trace = aa_solve(op, x0, basic_config(m));
    CHECK(trace.reason == TerminationReason::converged);
    CHECK(trace.iterations() <= 2);
  }
}

#include "fpaccel/tyler.hpp"

#include "fpaccel/anderson.hpp"
#include "fpaccel/errors.hpp"
#include "fpaccel/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fpaccel {

namespace {

// Quadratic forms x_i^T Sigma^{-1} x_i for all columns through one Cholesky
// factor. Throws `failure` when the factorization breaks down or the factor
// diagonal suggests a condition estimate above 1e14.
Vector quadratic_forms(const Matrix& sigma, const Matrix& X, const char* failure) {
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw Error(failure);
  const Matrix L = llt.matrixL();
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (Index i = 0; i < L.rows(); ++i) {
    dmin = std::min(dmin, L(i, i));
    dmax = std::max(dmax, L(i, i));
  }
  if (!(dmin > 0.0) || (dmax / dmin) * (dmax / dmin) > 1e14) throw Error(failure);
  const Matrix Z = llt.matrixL().solve(X);
  return Z.colwise().squaredNorm().transpose();
}

Matrix trace_normalized(const Matrix& S, double target) {
  const double tr = S.trace();
  if (!(tr > 0.0)) throw Error("nonpositive trace");
  return S * (target / tr);
}

}  // namespace

TylerProblem::TylerProblem(Matrix data) : X(std::move(data)) {
  if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("empty data matrix");
  if (!X.allFinite()) throw std::invalid_argument("data must be finite");
  for (Index i = 0; i < X.cols(); ++i) {
    if (X.col(i).norm() == 0.0) throw std::invalid_argument("zero data column");
  }
}

Matrix tme_standard_map(const ShapeMatrix& shape, const TylerProblem& prob) {
  const Index p = prob.p(), n = prob.n();
  if (shape.sigma.rows() != p || shape.sigma.cols() != p) {
    throw std::invalid_argument("shape dimension mismatch");
  }
  const Vector q = quadratic_forms(shape.sigma, prob.X, "singular shape");
  const Vector weights = q.cwiseInverse();
  Matrix G = (static_cast<double>(p) / static_cast<double>(n)) *
             (prob.X * weights.asDiagonal() * prob.X.transpose());
  G = 0.5 * (G + G.transpose());
  return G;
}

ShapeMatrix tme_standard_step(const ShapeMatrix& shape, const TylerProblem& prob) {
  return {trace_normalized(tme_standard_map(shape, prob), static_cast<double>(prob.p())), true};
}

ShapeMatrix sigma_from_w(const Vector& w, const TylerProblem& prob, bool trace_normalize) {
  if (w.size() != prob.n()) throw std::invalid_argument("weight vector has wrong length");
  if (!w.allFinite()) throw std::invalid_argument("weights must be finite");
  // Sigma = (p/n) * M M^T with M = X diag(e^{w/2}); keeps the result PSD.
  const Vector half = (0.5 * w.array()).exp();
  const Matrix M = prob.X * half.asDiagonal();
  Matrix sigma = (static_cast<double>(prob.p()) / static_cast<double>(prob.n())) *
                 (M * M.transpose());
  sigma = 0.5 * (sigma + sigma.transpose());
  if (!sigma.allFinite()) throw Error("singular scatter");
  if (trace_normalize) return {trace_normalized(sigma, static_cast<double>(prob.p())), true};
  return {std::move(sigma), false};
}

Vector tme_log_step(const Vector& w, const TylerProblem& prob) {
  const ShapeMatrix scatter = sigma_from_w(w, prob, false);
  const Vector q = quadratic_forms(scatter.sigma, prob.X, "singular scatter");
  for (Index j = 0; j < q.size(); ++j) {
    if (!(q(j) > 0.0)) throw Error("lost positivity");
  }
  return (-q.array().log()).matrix();
}

Matrix jacobian_fd(const std::function<Vector(const Vector&)>& F, const Vector& w, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  const Index n = w.size();
  Matrix J(n, n);
  Vector shifted = w;
  for (Index j = 0; j < n; ++j) {
    const double h = step * (1.0 + std::abs(w(j)));
    shifted(j) = w(j) + h;
    const Vector fp = F(shifted);
    shifted(j) = w(j) - h;
    const Vector fm = F(shifted);
    shifted(j) = w(j);
    if (fp.size() != n || fm.size() != n) throw std::invalid_argument("F has wrong dimension");
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  return J;
}

double symmetry_defect(const Matrix& J) {
  if (J.rows() != J.cols()) throw std::invalid_argument("matrix must be square");
  const double scale = std::max(J.norm(), std::numeric_limits<double>::min());
  return (J - J.transpose()).norm() / scale;
}

SpectrumSummary deflated_tme_spectrum(const Matrix& J) {
  if (J.rows() != J.cols()) throw std::invalid_argument("matrix must be square");
  if (J.rows() < 2) throw std::invalid_argument("need at least a 2x2 matrix");
  if (symmetry_defect(J) > 1e-3) throw std::invalid_argument("matrix too asymmetric");

  const Matrix S = 0.5 * (J + J.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");

  const Index n = S.rows();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  Index scale_mode = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const double cos_const = std::abs(es.eigenvectors().col(i).sum()) / sqrt_n;
    if (cos_const >= 0.99) {
      const double dist = std::abs(es.eigenvalues()(i) - 1.0);
      if (dist < best_dist) {
        best_dist = dist;
        scale_mode = i;
      }
    }
  }
  if (scale_mode < 0) throw Error("no scale mode found");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    if (i == scale_mode) continue;
    lo = std::min(lo, es.eigenvalues()(i));
    hi = std::max(hi, es.eigenvalues()(i));
  }
  return summarize_spectrum(lo, hi);
}

TylerConditionReport check_tyler_necessary_conditions(const TylerProblem& prob, int samples,
                                                      std::uint64_t seed) {
  TylerConditionReport report;
  report.p = prob.p();
  report.n = prob.n();
  report.subspace_samples = 0;

  report.has_more_samples_than_dims = prob.n() > prob.p();
  if (!report.has_more_samples_than_dims) {
    report.first_violation = "need n > p";
    return report;
  }

  Eigen::ColPivHouseholderQR<Matrix> full_qr(prob.X);
  report.full_row_rank = full_qr.rank() == prob.p();
  if (!report.full_row_rank) {
    report.first_violation = "data does not span the ambient space";
    return report;
  }

  const Index p = prob.p(), n = prob.n();
  if (p >= 2) {
    SplitMix64 g(seed);
    for (int s = 0; s < samples; ++s) {
      const Index d = 1 + static_cast<Index>(g.next_u64() % static_cast<std::uint64_t>(p - 1));
      // d distinct columns by rejection; d < p << n keeps this cheap.
      std::vector<Index> picked;
      while (static_cast<Index>(picked.size()) < d) {
        const Index c = static_cast<Index>(g.next_u64() % static_cast<std::uint64_t>(n));
        if (std::find(picked.begin(), picked.end(), c) == picked.end()) picked.push_back(c);
      }
      Matrix B(p, d);
      for (Index j = 0; j < d; ++j) B.col(j) = prob.X.col(picked[static_cast<std::size_t>(j)]);

      Eigen::ColPivHouseholderQR<Matrix> qr(B);
      const Index span_dim = std::max<Index>(qr.rank(), 1);
      const Matrix Q = Matrix(qr.householderQ()).leftCols(span_dim);

      Index within = 0;
      for (Index c = 0; c < n; ++c) {
        const Vector x = prob.X.col(c);
        if ((x - Q * (Q.transpose() * x)).norm() <= 1e-8) ++within;
      }
      ++report.subspace_samples;
      if (within * p >= n * span_dim) {
        report.first_violation = "a sampled subspace of dimension " + std::to_string(span_dim) +
                                 " holds " + std::to_string(within) + " of " +
                                 std::to_string(n) + " points";
        return report;
      }
    }
  }

  report.pass = true;
  return report;
}

FunctionOperator make_tme_log_operator(const TylerProblem& prob) {
  const TylerProblem* ptr = &prob;
  return FunctionOperator(prob.n(), [ptr](const Vector& w) { return tme_log_step(w, *ptr); });
}

Vector vec(const Matrix& M) {
  return Eigen::Map<const Vector>(M.data(), M.size());
}

Matrix unvec(const Vector& v, Index p) {
  if (v.size() != p * p) throw std::invalid_argument("length is not p*p");
  return Eigen::Map<const Matrix>(v.data(), p, p);
}

FunctionOperator make_tme_standard_operator(const TylerProblem& prob) {
  const TylerProblem* ptr = &prob;
  const Index p = prob.p();
  return FunctionOperator(p * p, [ptr, p](const Vector& s) {
    const ShapeMatrix shape{unvec(s, p), true};
    return vec(tme_standard_step(shape, *ptr).sigma);
  });
}

Vector tme_reference_weights(const TylerProblem& prob, double tol) {
  const FunctionOperator op = make_tme_log_operator(prob);
  AAConfig cfg;
  cfg.depth = 3;
  cfg.coeff_bound = 1e4;
  cfg.residual_tol = tol;
  cfg.max_iterations = 5000;
  const SolveTrace accelerated = aa_solve(op, Vector::Zero(prob.n()), cfg);
  Vector w = accelerated.records.back().iterate;
  if (accelerated.reason == TerminationReason::converged) return w;
  const SolveTrace plain = fp_iterate(op, w, tol, 100000);
  return plain.records.back().iterate;
}

}  // namespace fpaccel

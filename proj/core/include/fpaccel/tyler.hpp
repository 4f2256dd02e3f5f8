#pragma once

#include "fpaccel/theory.hpp"
#include "fpaccel/types.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace fpaccel {

// Data matrix whose columns are the sample points. Estimation additionally
// needs n > p and the subspace condition checked by
// check_tyler_necessary_conditions; construction only rejects zero columns
// so that degenerate inputs can still be diagnosed.
struct TylerProblem {
  Matrix X;

  explicit TylerProblem(Matrix data);

  Index p() const { return X.rows(); }
  Index n() const { return X.cols(); }
};

struct ShapeMatrix {
  Matrix sigma;
  bool trace_normalized = false;
};

// Raw scatter update (p/n) sum_i x_i x_i^T / (x_i^T Sigma^{-1} x_i), without
// the trace rescaling. Degree-1 homogeneous in Sigma.
Matrix tme_standard_map(const ShapeMatrix& shape, const TylerProblem& prob);

// Scatter update rescaled to trace p. Quadratic forms go through a Cholesky
// factor, never an explicit inverse. Throws "singular shape" when the factor
// fails or its diagonal condition estimate exceeds 1e14.
ShapeMatrix tme_standard_step(const ShapeMatrix& shape, const TylerProblem& prob);

// Log-domain update: F_j(w) = -log(x_j^T Sigma(w)^{-1} x_j) with
// Sigma(w) = (p/n) sum_i e^{w_i} x_i x_i^T. Shift equivariant:
// F(w + c 1) = F(w) + c 1.
Vector tme_log_step(const Vector& w, const TylerProblem& prob);

// Sigma(w), optionally rescaled to trace p.
ShapeMatrix sigma_from_w(const Vector& w, const TylerProblem& prob, bool trace_normalize);

// Central-difference Jacobian, column j = (F(w + h e_j) - F(w - h e_j)) / 2h
// with h = step * (1 + |w_j|).
Matrix jacobian_fd(const std::function<Vector(const Vector&)>& F, const Vector& w, double step);

// ||J - J^T||_F / max(||J||_F, tiny).
double symmetry_defect(const Matrix& J);

// Symmetrizes J, removes the scale mode (the eigenpair nearest eigenvalue 1
// whose eigenvector aligns with the constant vector, |cos| >= 0.99) and
// summarizes the remaining spectrum. Throws "no scale mode found" when no
// eigenpair qualifies.
SpectrumSummary deflated_tme_spectrum(const Matrix& J);

struct TylerConditionReport {
  bool pass = false;
  std::string first_violation;     // empty when pass
  Index p = 0;
  Index n = 0;
  bool has_more_samples_than_dims = false;
  bool full_row_rank = false;
  int subspace_samples = 0;
  // Subspace concentration is only sampled, not enumerated; a pass means no
  // sampled span of dimension d held nd/p or more of the points.
  bool sampled_only = true;
};

TylerConditionReport check_tyler_necessary_conditions(const TylerProblem& prob,
                                                      int samples = 200,
                                                      std::uint64_t seed = 0x7C0FFEEULL);

// Operator adapters; the problem must outlive the returned operator.
FunctionOperator make_tme_log_operator(const TylerProblem& prob);

// Standard iteration on vec(Sigma) including the trace rescaling, so the
// plain solver's residual is the Frobenius norm of the normalized update
// difference.
FunctionOperator make_tme_standard_operator(const TylerProblem& prob);

Vector vec(const Matrix& M);
Matrix unvec(const Vector& v, Index p);

// Reference log-domain fixed point: accelerated depth-3 solve to `tol`, with
// a long plain-iteration fallback when acceleration stalls first.
Vector tme_reference_weights(const TylerProblem& prob, double tol = 1e-13);

}  // namespace fpaccel

#pragma once

#include "fpaccel/types.hpp"

#include <vector>

namespace fpaccel {

// Spectral summary of a symmetric contractive map together with the
// pairwise improvement constant w0 and the resulting two-step rate bound.
struct SpectrumSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double op_norm = 0.0;     // max(|lambda_min|, |lambda_max|)
  double w0 = 0.0;
  double rate_bound = 0.0;  // sqrt(w0 * op_norm)
};

// Objective whose supremum over a >= 0 defines w0:
//   sin[ asin( |dl| a / sqrt(4 + (2 - s)^2 a^2) )
//        + |atan(a) - atan((1 - s/2) a)| ]
// with dl = lambda_max - lambda_min and s = lambda_max + lambda_min. The
// asin argument is clamped against roundoff. Passing a = +infinity returns
// the analytic endpoint value |dl| / (2 - s).
double w0_objective(double a, double lambda_min, double lambda_max);

// Supremum of w0_objective over a in [0, +inf]: tan-substituted uniform grid
// of 10001 points over [0, pi/2] (analytic endpoint), then golden-section
// refinement around the best grid cell down to an interval of 1e-12.
double compute_w0(double lambda_min, double lambda_max);

// Closed form for the scalar-spectrum case: w / (2 - w).
double scalar_w0(double w);

SpectrumSummary summarize_spectrum(double lambda_min, double lambda_max);
SpectrumSummary spectrum_of(const Matrix& W);

struct TightInitPair {
  Vector xtilde0;
  Vector xtilde1;
};

// Residual-space starting pair that makes the two-step improvement ratio of
// the depth-1 accelerated iteration on W = w*I exactly w^2 / (2 - w) at
// every pair: xtilde1 = (0, 1) and xtilde0 = xtilde1 + (sin phi, -cos phi)
// with sin phi = 1/sqrt(2 - w).
TightInitPair make_tight_init_scalar(double w);

struct PairwiseBoundRow {
  int k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  bool floor = false;  // denominator under the noise floor; exempt
};

// Two-step improvement check for traces produced on q(x) = W x + a with W
// symmetric contractive. Emits, for each k >= 2,
//   lhs = ||(W-I)(x_{k+1} - x*)|| / ||(W-I)(x_{k-1} - x*)||,  rhs = w0 ||W||,
// satisfied iff lhs <= rhs (1 + 1e-9). Rows whose denominator falls at or
// below 100 * eps * ||(W-I) x_1|| are marked floor and exempted.
std::vector<PairwiseBoundRow> check_pairwise_bound(const SolveTrace& trace, const Matrix& W,
                                                   const Vector& a);

// r_est(k) = max over n >= k of error_norms[n]^(1/n), where entry i of the
// input holds the error at iteration i+1. Computed by a single reverse scan;
// the output is non-increasing. Zero entries are bumped to the smallest
// positive double before exponentiation.
std::vector<double> estimate_r_factor(const std::vector<double>& error_norms);

}  // namespace fpaccel

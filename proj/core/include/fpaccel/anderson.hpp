#pragma once

#include "fpaccel/types.hpp"

#include <limits>
#include <vector>

namespace fpaccel {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct AAConfig {
  int depth = 1;                     // window depth m (window holds up to m+1 entries)
  double coeff_bound = kUnbounded;   // box bound on combination coefficients
  double damping = 1.0;              // beta in (0,1], 1 = undamped
  double residual_tol = 1e-12;
  int max_iterations = 1000;
  double svd_cutoff = 1e-12;         // relative singular value truncation in the subproblem

  void validate() const;  // throws std::invalid_argument
};

// Sliding window of iterates and aligned residuals f = q(x) - x. The oldest
// pair is evicted once the window is full.
class AAHistory {
public:
  explicit AAHistory(int capacity);

  void push(Vector iterate, Vector residual);
  void clear() { iterates_.clear(); residuals_.clear(); }

  Index size() const { return static_cast<Index>(iterates_.size()); }
  int capacity() const { return capacity_; }
  const std::vector<Vector>& iterates() const { return iterates_; }
  const std::vector<Vector>& residuals() const { return residuals_; }

private:
  int capacity_;
  std::vector<Vector> iterates_;
  std::vector<Vector> residuals_;
};

struct SubproblemResult {
  Vector coefficients;
  double objective = 0.0;
};

// Minimizes the Euclidean norm of the coefficient combination of the given
// residual vectors subject to the coefficients summing to one and, when
// coeff_bound is finite, |alpha_j| <= coeff_bound for all j.
//
// Unbounded case: the sum constraint is eliminated against the last
// coefficient and the resulting least-squares problem is solved by SVD with
// relative cutoff svd_cutoff (truncated directions zeroed, giving the
// minimum-norm solution and deterministic tie-breaking).
//
// Bounded case: exact active-set enumeration over the <= 3^L clamp patterns
// of the box (coordinate states: free, +bound, -bound); the feasible
// candidate with the least objective wins and ties go to the
// lexicographically smallest pattern in the order free < +bound < -bound.
//
// Throws InfeasibleError when coeff_bound < 1/L. An all-zero residual list
// yields the unit coefficient on the newest entry.
SubproblemResult aa_solve_subproblem(const std::vector<Vector>& residuals,
                                     double coeff_bound, double svd_cutoff);

struct AAStepResult {
  Vector next;
  Vector coefficients;
  double objective = 0.0;
};

// One accelerated update from the current window:
//   x_next = beta * sum_j alpha_j q(x_j) + (1 - beta) * sum_j alpha_j x_j
// with alpha from aa_solve_subproblem. Accepts damping in [0, 1] even
// though full solves require (0, 1].
AAStepResult aa_step(const AAHistory& history, const AAConfig& config);

// Accelerated fixed-point solve. The first update acts on the window {x0},
// reducing to (a damped) operator application; combinations start at k = 1
// with the window {x0, x1}. Stops on residual <= residual_tol,
// max_iterations, or stagnation (no relative 1e-3 improvement of the best
// residual over 50 consecutive iterations once it is below 1e3 * tol).
SolveTrace aa_solve(const FixedPointOperator& q, const Vector& x0, const AAConfig& config);

// Plain fixed-point iteration x <- q(x). Stops on residual <= tol or after
// max_iter applications.
SolveTrace fp_iterate(const FixedPointOperator& q, const Vector& x0, double tol, int max_iter);

// Residual-space form of the accelerated iteration for a linear symmetric
// map: project the origin onto the affine hull of the current window, then
// apply W. The two starting vectors may be chosen independently. Returns the
// norm sequence of the residual iterates: the two supplied norms followed by
// `steps` newly generated ones.
std::vector<double> reformulated_aa_linear(const Matrix& W, const Vector& xtilde0,
                                           const Vector& xtilde1, int m, int steps);

}  // namespace fpaccel

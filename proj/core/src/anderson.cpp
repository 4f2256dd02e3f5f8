#include "fpaccel/anderson.hpp"

#include "fpaccel/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpaccel {

namespace {

constexpr double kStagnationImprovement = 1e-3;
constexpr int kStagnationWindow = 50;
// 3^L patterns are enumerated in the bounded subproblem; windows this large
// make no sense there anyway.
constexpr int kMaxBoundedWindow = 12;

// Minimum-norm solution of min ||A g + b|| by SVD with a relative singular
// value cutoff; truncated directions contribute zero.
Vector svd_min_norm_solve(const Matrix& A, const Vector& b, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double s_max = sv.size() > 0 ? sv(0) : 0.0;
  const Vector y = svd.matrixU().transpose() * (-b);
  Vector g = Vector::Zero(A.cols());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff * s_max && sv(i) > 0.0) {
      g += (y(i) / sv(i)) * svd.matrixV().col(i);
    }
  }
  return g;
}

// min ||sum_i alpha_i f_i + c|| subject to sum_i alpha_i = s over the listed
// columns. The constraint is eliminated against the last coefficient.
Vector sum_constrained_ls(const std::vector<const Vector*>& cols, double s, const Vector& c,
                          double cutoff) {
  const Index L = static_cast<Index>(cols.size());
  Vector alpha(L);
  if (L == 1) {
    alpha(0) = s;
    return alpha;
  }
  const Vector& last = *cols[L - 1];
  Matrix A(last.size(), L - 1);
  for (Index i = 0; i + 1 < L; ++i) A.col(i) = *cols[i] - last;
  const Vector b = c + s * last;
  const Vector g = svd_min_norm_solve(A, b, cutoff);
  for (Index i = 0; i + 1 < L; ++i) alpha(i) = g(i);
  alpha(L - 1) = s - g.sum();
  return alpha;
}

double combination_norm(const std::vector<Vector>& residuals, const Vector& alpha) {
  Vector combo = Vector::Zero(residuals.front().size());
  for (std::size_t i = 0; i < residuals.size(); ++i) combo += alpha(static_cast<Index>(i)) * residuals[i];
  return combo.norm();
}

SubproblemResult solve_unbounded(const std::vector<Vector>& residuals, double cutoff) {
  std::vector<const Vector*> cols;
  cols.reserve(residuals.size());
  for (const auto& f : residuals) cols.push_back(&f);
  const Vector zero = Vector::Zero(residuals.front().size());
  SubproblemResult out;
  out.coefficients = sum_constrained_ls(cols, 1.0, zero, cutoff);
  out.objective = combination_norm(residuals, out.coefficients);
  return out;
}

// Coordinate states for the box enumeration; the numeric order doubles as
// the lexicographic tie-break order.
enum : int { kFree = 0, kUpper = 1, kLower = 2 };

SubproblemResult solve_bounded(const std::vector<Vector>& residuals, double bound,
                               double cutoff) {
  const int L = static_cast<int>(residuals.size());
  if (L > kMaxBoundedWindow) {
    throw std::invalid_argument("bounded subproblem window too large");
  }
  const Index n = residuals.front().size();

  long total = 1;
  for (int i = 0; i < L; ++i) total *= 3;

  struct Candidate {
    double objective;
    long pattern;
    Vector alpha;
  };
  std::vector<Candidate> feasible;
  std::vector<int> state(L);

  for (long code = 0; code < total; ++code) {
    long rest = code;
    for (int i = L - 1; i >= 0; --i) {
      state[i] = static_cast<int>(rest % 3);
      rest /= 3;
    }

    double clamped_sum = 0.0;
    Vector c = Vector::Zero(n);
    std::vector<int> free_idx;
    for (int i = 0; i < L; ++i) {
      if (state[i] == kFree) {
        free_idx.push_back(i);
      } else {
        const double v = state[i] == kUpper ? bound : -bound;
        clamped_sum += v;
        c += v * residuals[static_cast<std::size_t>(i)];
      }
    }
    const double s = 1.0 - clamped_sum;

    Vector alpha = Vector::Zero(L);
    if (free_idx.empty()) {
      if (std::abs(s) > 1e-12 * std::max(1.0, bound * L)) continue;
      for (int i = 0; i < L; ++i) alpha(i) = state[i] == kUpper ? bound : -bound;
    } else {
      std::vector<const Vector*> cols;
      cols.reserve(free_idx.size());
      for (int i : free_idx) cols.push_back(&residuals[static_cast<std::size_t>(i)]);
      const Vector alpha_free = sum_constrained_ls(cols, s, c, cutoff);
      bool in_box = true;
      for (Index j = 0; j < alpha_free.size(); ++j) {
        if (std::abs(alpha_free(j)) > bound + 1e-12) { in_box = false; break; }
      }
      if (!in_box) continue;
      for (int i = 0; i < L; ++i) alpha(i) = state[i] == kUpper ? bound : (state[i] == kLower ? -bound : 0.0);
      for (std::size_t j = 0; j < free_idx.size(); ++j) alpha(free_idx[j]) = alpha_free(static_cast<Index>(j));
    }
    feasible.push_back({combination_norm(residuals, alpha), code, std::move(alpha)});
  }

  if (feasible.empty()) {
    // Unreachable once bound >= 1/L: some clamp pattern always admits the sum.
    throw std::logic_error("bounded subproblem found no feasible pattern");
  }

  double best = feasible.front().objective;
  for (const auto& cand : feasible) best = std::min(best, cand.objective);
  const double tie = 1e-12 * std::max(1.0, best);
  for (const auto& cand : feasible) {
    if (cand.objective <= best + tie) {
      return {cand.alpha, cand.objective};
    }
  }
  return {feasible.front().alpha, feasible.front().objective};
}

}  // namespace

void AAConfig::validate() const {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (!(coeff_bound > 0.0)) throw std::invalid_argument("coeff_bound must be positive");
  if (!(damping > 0.0) || damping > 1.0) throw std::invalid_argument("damping must be in (0, 1]");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(svd_cutoff > 0.0) || svd_cutoff >= 1.0) throw std::invalid_argument("svd_cutoff must be in (0, 1)");
}

AAHistory::AAHistory(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("history capacity must be >= 1");
}

void AAHistory::push(Vector iterate, Vector residual) {
  if (iterate.size() != residual.size()) {
    throw std::invalid_argument("iterate/residual size mismatch");
  }
  if (static_cast<int>(iterates_.size()) == capacity_) {
    iterates_.erase(iterates_.begin());
    residuals_.erase(residuals_.begin());
  }
  iterates_.push_back(std::move(iterate));
  residuals_.push_back(std::move(residual));
}

SubproblemResult aa_solve_subproblem(const std::vector<Vector>& residuals, double coeff_bound,
                                     double svd_cutoff) {
  if (residuals.empty()) throw std::invalid_argument("residual list is empty");
  const Index n = residuals.front().size();
  for (const auto& f : residuals) {
    if (f.size() != n) throw std::invalid_argument("residual length mismatch");
  }
  if (!(svd_cutoff > 0.0) || svd_cutoff >= 1.0) {
    throw std::invalid_argument("svd_cutoff must be in (0, 1)");
  }
  if (!(coeff_bound > 0.0)) throw std::invalid_argument("coeff_bound must be positive");

  const int L = static_cast<int>(residuals.size());
  const bool bounded = std::isfinite(coeff_bound);
  if (bounded && coeff_bound < 1.0 / L) {
    throw InfeasibleError("infeasible: coefficient box excludes the sum-to-one constraint");
  }

  double max_abs = 0.0;
  for (const auto& f : residuals) max_abs = std::max(max_abs, f.cwiseAbs().maxCoeff());
  if (max_abs == 0.0 && (!bounded || coeff_bound >= 1.0)) {
    Vector alpha = Vector::Zero(L);
    alpha(L - 1) = 1.0;
    return {std::move(alpha), 0.0};
  }

  return bounded ? solve_bounded(residuals, coeff_bound, svd_cutoff)
                 : solve_unbounded(residuals, svd_cutoff);
}

AAStepResult aa_step(const AAHistory& history, const AAConfig& config) {
  if (history.size() == 0) throw std::invalid_argument("history is empty");
  SubproblemResult sub = aa_solve_subproblem(history.residuals(), config.coeff_bound,
                                             config.svd_cutoff);
  const auto& xs = history.iterates();
  const auto& fs = history.residuals();
  Vector next = Vector::Zero(xs.front().size());
  for (Index i = 0; i < history.size(); ++i) next += sub.coefficients(i) * xs[static_cast<std::size_t>(i)];
  if (config.damping != 0.0) {
    Vector combined_residual = Vector::Zero(next.size());
    for (Index i = 0; i < history.size(); ++i) {
      combined_residual += sub.coefficients(i) * fs[static_cast<std::size_t>(i)];
    }
    next += config.damping * combined_residual;
  }
  return {std::move(next), std::move(sub.coefficients), sub.objective};
}

SolveTrace aa_solve(const FixedPointOperator& q, const Vector& x0, const AAConfig& config) {
  config.validate();
  if (x0.size() != q.dimension()) throw std::invalid_argument("x0 has wrong dimension");

  SolveTrace trace;
  AAHistory history(config.depth + 1);
  Vector x = x0;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (int k = 0;; ++k) {
    Vector fx = q.evaluate(x);
    if (!fx.allFinite()) {
      throw DivergedError("diverged: operator produced non-finite values", std::move(x));
    }
    Vector f = fx - x;
    const double rnorm = f.norm();
    history.push(x, std::move(f));
    trace.records.push_back({k, x, rnorm, Vector(), std::numeric_limits<double>::quiet_NaN()});

    if (rnorm <= config.residual_tol) {
      trace.reason = TerminationReason::converged;
      break;
    }
    if (k == config.max_iterations) {
      trace.reason = TerminationReason::max_iterations;
      break;
    }
    if (rnorm < best * (1.0 - kStagnationImprovement)) {
      best = rnorm;
      stalled = 0;
    } else if (best < 1e3 * config.residual_tol && ++stalled >= kStagnationWindow) {
      trace.reason = TerminationReason::stagnated;
      break;
    }

    AAStepResult step = aa_step(history, config);
    trace.records.back().coefficients = std::move(step.coefficients);
    trace.records.back().objective = step.objective;
    x = std::move(step.next);
  }
  return trace;
}

SolveTrace fp_iterate(const FixedPointOperator& q, const Vector& x0, double tol, int max_iter) {
  if (x0.size() != q.dimension()) throw std::invalid_argument("x0 has wrong dimension");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

  SolveTrace trace;
  Vector x = x0;
  for (int k = 0;; ++k) {
    Vector fx = q.evaluate(x);
    if (!fx.allFinite()) {
      throw DivergedError("diverged: operator produced non-finite values", std::move(x));
    }
    const double rnorm = (fx - x).norm();
    trace.records.push_back({k, x, rnorm, Vector(), std::numeric_limits<double>::quiet_NaN()});
    if (rnorm <= tol) {
      trace.reason = TerminationReason::converged;
      break;
    }
    if (k == max_iter) {
      trace.reason = TerminationReason::max_iterations;
      break;
    }
    x = std::move(fx);
  }
  return trace;
}

std::vector<double> reformulated_aa_linear(const Matrix& W, const Vector& xtilde0,
                                           const Vector& xtilde1, int m, int steps) {
  if (W.rows() != W.cols()) throw std::invalid_argument("W must be square");
  if (xtilde0.size() != W.rows() || xtilde1.size() != W.rows()) {
    throw std::invalid_argument("starting vectors have wrong dimension");
  }
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  const double w_norm = W.norm();
  if (w_norm > 0.0 && (W - W.transpose()).norm() > 1e-12 * w_norm) {
    throw Error("not symmetric");
  }

  std::vector<Vector> xs = {xtilde0, xtilde1};
  std::vector<double> norms = {xtilde0.norm(), xtilde1.norm()};
  norms.reserve(static_cast<std::size_t>(steps) + 2);

  for (int k = 1; k <= steps; ++k) {
    const int mk = std::min(m, k);
    std::vector<Vector> window(xs.end() - (mk + 1), xs.end());
    const SubproblemResult sub = aa_solve_subproblem(window, kUnbounded, 1e-12);
    Vector y = Vector::Zero(W.rows());
    for (std::size_t i = 0; i < window.size(); ++i) {
      y += sub.coefficients(static_cast<Index>(i)) * window[i];
    }
    Vector next = W * y;
    norms.push_back(next.norm());
    xs.push_back(std::move(next));
  }
  return norms;
}

}  // namespace fpaccel

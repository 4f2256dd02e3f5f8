#pragma once

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace fpaccel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Sole interface between solvers and problems. Implementations must be pure
// and deterministic: repeated calls on equal input yield identical output
// and no observable state changes between calls.
class FixedPointOperator {
public:
  virtual ~FixedPointOperator() = default;
  virtual Index dimension() const = 0;
  virtual Vector evaluate(const Vector& x) const = 0;
};

// Adapts a callable to the operator interface.
class FunctionOperator final : public FixedPointOperator {
public:
  FunctionOperator(Index dim, std::function<Vector(const Vector&)> fn)
      : dim_(dim), fn_(std::move(fn)) {}

  Index dimension() const override { return dim_; }
  Vector evaluate(const Vector& x) const override { return fn_(x); }

private:
  Index dim_;
  std::function<Vector(const Vector&)> fn_;
};

enum class TerminationReason { converged, max_iterations, stagnated };

std::string to_string(TerminationReason reason);

struct IterationRecord {
  int k = 0;
  Vector iterate;
  double residual_norm = 0.0;
  // Combination coefficients used to build iterate k+1. Empty when the step
  // was a plain fixed-point application or when the run stopped here.
  Vector coefficients;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct SolveTrace {
  std::vector<IterationRecord> records;
  TerminationReason reason = TerminationReason::max_iterations;

  std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
  double final_residual() const;
  std::vector<double> residual_norms() const;
};

// Euclidean distances of the trace iterates from a known fixed point.
std::vector<double> iterate_error_norms(const SolveTrace& trace, const Vector& x_star);

}  // namespace fpaccel

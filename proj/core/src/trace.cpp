#include "fpaccel/types.hpp"

namespace fpaccel {

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::converged: return "converged";
    case TerminationReason::max_iterations: return "max_iterations";
    case TerminationReason::stagnated: return "stagnated";
  }
  return "unknown";
}

double SolveTrace::final_residual() const {
  return records.empty() ? std::numeric_limits<double>::quiet_NaN()
                         : records.back().residual_norm;
}

std::vector<double> SolveTrace::residual_norms() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.residual_norm);
  return out;
}

std::vector<double> iterate_error_norms(const SolveTrace& trace, const Vector& x_star) {
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (const auto& r : trace.records) out.push_back((r.iterate - x_star).norm());
  return out;
}

}  // namespace fpaccel

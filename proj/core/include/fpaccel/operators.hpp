#pragma once

#include "fpaccel/types.hpp"

#include <cstdint>
#include <optional>

namespace fpaccel {

// q(x) = W x + a with W symmetric.
class LinearSymmetricOperator final : public FixedPointOperator {
public:
  LinearSymmetricOperator(Matrix W, Vector a);  // rejects asymmetric W

  Index dimension() const override { return W_.rows(); }
  Vector evaluate(const Vector& x) const override { return W_ * x + a_; }

  const Matrix& matrix() const { return W_; }
  const Vector& offset() const { return a_; }

private:
  Matrix W_;
  Vector a_;
};

LinearSymmetricOperator make_diag_operator(const Vector& diagonal, const Vector& a);

// W = Q Lambda Q^T with Q the orthogonal factor of a seeded standard-normal
// matrix (QR with the R-diagonal signs fixed) and Lambda drawn uniformly from
// [eig_low, eig_high], with one eigenvalue pinned to forced_min_eig when
// given. Deterministic in the seed.
LinearSymmetricOperator make_random_symmetric(int n, double eig_low, double eig_high,
                                              std::optional<double> forced_min_eig,
                                              std::uint64_t seed);

}  // namespace fpaccel

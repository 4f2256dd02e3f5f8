#include "fpaccel/operators.hpp"

#include "fpaccel/datagen.hpp"
#include "fpaccel/rng.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace fpaccel {

LinearSymmetricOperator::LinearSymmetricOperator(Matrix W, Vector a)
    : W_(std::move(W)), a_(std::move(a)) {
  if (W_.rows() != W_.cols()) throw std::invalid_argument("W must be square");
  if (a_.size() != W_.rows()) throw std::invalid_argument("offset has wrong dimension");
  if (!W_.allFinite() || !a_.allFinite()) throw std::invalid_argument("entries must be finite");
  const double scale = std::max(1.0, W_.norm());
  if ((W_ - W_.transpose()).norm() > 1e-12 * scale) {
    throw std::invalid_argument("W is not symmetric");
  }
}

LinearSymmetricOperator make_diag_operator(const Vector& diagonal, const Vector& a) {
  Matrix W = Matrix::Zero(diagonal.size(), diagonal.size());
  W.diagonal() = diagonal;
  return LinearSymmetricOperator(std::move(W), a);
}

LinearSymmetricOperator make_random_symmetric(int n, double eig_low, double eig_high,
                                              std::optional<double> forced_min_eig,
                                              std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("bad spectrum: n must be >= 1");
  if (!(eig_low > -1.0) || !(eig_high < 1.0) || !(eig_low <= eig_high)) {
    throw std::invalid_argument("bad spectrum: need -1 < eig_low <= eig_high < 1");
  }
  if (forced_min_eig && (!(*forced_min_eig > -1.0) || !(*forced_min_eig <= eig_low))) {
    throw std::invalid_argument("bad spectrum: forced_min_eig must lie in (-1, eig_low]");
  }

  SplitMix64 g(seed);
  Vector eigenvalues(n);
  const int sampled = forced_min_eig ? n - 1 : n;
  for (int i = 0; i < sampled; ++i) {
    eigenvalues(i) = eig_low + (eig_high - eig_low) * g.next_double();
  }
  if (forced_min_eig) eigenvalues(n - 1) = *forced_min_eig;

  // Orthogonal factor of a standard-normal matrix with the R-diagonal signs
  // fixed, so the draw is reproducible and well spread.
  const Matrix Z = normal_matrix(g, n, n);
  Eigen::HouseholderQR<Matrix> qr(Z);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (R(i, i) < 0.0) Q.col(i) = -Q.col(i);
  }

  Matrix W = Q * eigenvalues.asDiagonal() * Q.transpose();
  W = 0.5 * (W + W.transpose());
  return LinearSymmetricOperator(std::move(W), Vector::Zero(n));
}

}  // namespace fpaccel

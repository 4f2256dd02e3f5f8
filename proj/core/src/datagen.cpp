#include "fpaccel/datagen.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace fpaccel {

Vector normal_vector(SplitMix64& g, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = g.next_normal();
  return v;
}

Matrix normal_matrix(SplitMix64& g, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = g.next_normal();
  }
  return m;
}

Matrix ar1_covariance(Index p, double base) {
  Matrix S(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      S(i, j) = std::pow(base, static_cast<double>(std::abs(i - j)));
    }
  }
  return S;
}

Matrix matrix_sqrt_psd(const Matrix& S) {
  if (S.rows() != S.cols()) throw std::invalid_argument("matrix must be square");
  const double scale = std::max(1.0, S.norm());
  if ((S - S.transpose()).norm() > 1e-12 * scale) {
    throw std::invalid_argument("matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) throw std::invalid_argument("eigendecomposition failed");
  if (es.eigenvalues()(0) < -1e-10) {
    throw std::invalid_argument("matrix is indefinite beyond tolerance");
  }
  const Vector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Matrix R = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
  R = 0.5 * (R + R.transpose());
  return R;
}

TylerProblem gen_data_model_1(int p, int n, std::uint64_t seed) {
  if (p < 1 || n < 1) throw std::invalid_argument("dimensions must be positive");
  if (n <= p) throw std::invalid_argument("need n > p");
  const Matrix root = matrix_sqrt_psd(ar1_covariance(p, 0.7));
  SplitMix64 g(seed);
  const Matrix Z = normal_matrix(g, p, n);
  return TylerProblem(root * Z);
}

TylerProblem gen_data_model_2(int n0, int n1, int D, int d, std::uint64_t seed) {
  if (n0 < 1 || n1 < 1 || D < 1 || d < 1) throw std::invalid_argument("dimensions must be positive");
  if (d > D) throw std::invalid_argument("need d <= D");
  if (n0 + n1 <= D) throw std::invalid_argument("need n0 + n1 > D");

  SplitMix64 g(seed);
  const Matrix A = normal_matrix(g, n0, D);
  const Matrix mixer = normal_matrix(g, D, D);
  const Matrix B = normal_matrix(g, n1, d) / std::sqrt(static_cast<double>(d));

  Matrix rows(n0 + n1, D);
  rows.topRows(n0) = A * mixer;
  rows.bottomRows(n1).setZero();
  rows.bottomLeftCorner(n1, d) = B;
  return TylerProblem(rows.transpose());
}

}  // namespace fpaccel

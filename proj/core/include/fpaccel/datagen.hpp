#pragma once

#include "fpaccel/rng.hpp"
#include "fpaccel/tyler.hpp"
#include "fpaccel/types.hpp"

#include <cstdint>

namespace fpaccel {

// Standard-normal vector/matrix fills; matrices are filled column by column
// so that streams are reproducible from the documented generator alone.
Vector normal_vector(SplitMix64& g, Index n);
Matrix normal_matrix(SplitMix64& g, Index rows, Index cols);

// Covariance with entries base^|i-j| (AR(1) profile).
Matrix ar1_covariance(Index p, double base);

// Symmetric PSD square root via eigendecomposition; eigenvalues below zero
// are clamped. Rejects inputs with an eigenvalue under -1e-10.
Matrix matrix_sqrt_psd(const Matrix& S);

// Columns are S_p^{1/2} zeta with (S_p)_{ij} = 0.7^|i-j| and zeta standard
// normal. Deterministic in the seed.
TylerProblem gen_data_model_1(int p, int n, std::uint64_t seed);

// Inlier-outlier model: X = [randn(n0,D) * randn(D,D); [randn(n1,d)/sqrt(d) | 0]]^T,
// blocks drawn in that order. Deterministic in the seed.
TylerProblem gen_data_model_2(int n0, int n1, int D, int d, std::uint64_t seed);

}  // namespace fpaccel

#pragma once

#include <utility>

#include "eva/matrix.hpp"

namespace eva {

/// Relative pivot threshold below which a value counts as numerically zero.
inline constexpr double kRankTolerance = 1e-8;

/// Full-rank decomposition m = B1 * B2 by row-pivoted Gaussian elimination:
/// B1 has full column rank r, B2 (the nonzero echelon rows) full row rank r,
/// where r is the numerical rank of m at pivot threshold tol * max|m|.
/// Throws DegenerateInputError when m is numerically zero.
std::pair<Matrix, Matrix> full_rank_decompose(const Matrix& m, double tol = kRankTolerance);

/// Inverse by Gauss-Jordan elimination with partial pivoting. Throws
/// SingularMatrixError when a pivot falls below 1e-12 * max|m|.
Matrix invert(const Matrix& m);

/// Orthogonal factor of the QR decomposition of g (Householder reflections).
Matrix qr_orthogonal(const Matrix& g);

}  // namespace eva

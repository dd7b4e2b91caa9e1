#pragma once

#include "faultmimo/types.hpp"

namespace faultmimo {

// Least squares: Y X^* (X X^*)^{-1}. Throws NumericalError if X X^* is singular.
CMatrix estimate_ls(const CMatrix& Y, const CMatrix& X);

// LS scaled by K tr(YY^*) / (P (sigma2 K M + tr(YY^*))), P = ||X||_F^2.
// Returns zeros when tr(YY^*) = 0.
CMatrix estimate_ls_sls(const CMatrix& Y, const CMatrix& X, double sigma2);

// Subspace-projected estimate (K/P) A (A^*A)^{-1} A^* Y X^* for known steering matrix A.
CMatrix estimate_mmse(const CMatrix& Y, const CMatrix& X, const CMatrix& A);

// Orthogonal projector A (A^*A)^{-1} A^* onto range(A).
CMatrix range_projector(const CMatrix& A);

}  // namespace faultmimo

#include "faultmimo/baselines.hpp"

#include <cmath>

namespace faultmimo {

CMatrix estimate_ls(const CMatrix& Y, const CMatrix& X) {
  if (Y.cols() != X.cols()) throw std::invalid_argument("estimate_ls: Y and X must share L");
  const CMatrix gram = X * X.adjoint();
  Eigen::LDLT<CMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().real().minCoeff() <= 1e-14 * ldlt.vectorD().real().maxCoeff())
    throw NumericalError("estimate_ls: X X^* is singular");
  // Y X^* G^{-1} = (G^{-1} X Y^*)^* since G is Hermitian.
  return ldlt.solve(X * Y.adjoint()).adjoint();
}

CMatrix estimate_ls_sls(const CMatrix& Y, const CMatrix& X, double sigma2) {
  const double K = static_cast<double>(X.rows());
  const double M = static_cast<double>(Y.rows());
  const double power = X.squaredNorm();
  const double tr = Y.squaredNorm();
  if (tr == 0.0) return CMatrix::Zero(Y.rows(), X.rows());
  const double scale = K * tr / (power * (sigma2 * K * M + tr));
  return scale * Y * X.adjoint();
}

CMatrix range_projector(const CMatrix& A) {
  Eigen::ColPivHouseholderQR<CMatrix> qr(A);
  if (qr.rank() < A.cols()) throw NumericalError("range_projector: A is rank deficient");
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(A.rows(), A.cols());
  return Q * Q.adjoint();
}

CMatrix estimate_mmse(const CMatrix& Y, const CMatrix& X, const CMatrix& A) {
  const double K = static_cast<double>(X.rows());
  const double power = X.squaredNorm();
  Eigen::ColPivHouseholderQR<CMatrix> qr(A);
  if (qr.rank() < A.cols()) throw NumericalError("estimate_mmse: A is rank deficient");
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(A.rows(), A.cols());
  const CMatrix YX = Y * X.adjoint();
  return (K / power) * (Q * (Q.adjoint() * YX));
}

}  // namespace faultmimo

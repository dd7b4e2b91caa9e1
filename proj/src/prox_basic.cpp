#include <cmath>
#include <limits>

#include "faultmimo/prox.hpp"

namespace faultmimo {

void AdmmControls::validate() const {
  if (!(penalty > 0.0)) throw std::invalid_argument("AdmmControls: penalty must be positive");
  if (max_iters < 1) throw std::invalid_argument("AdmmControls: max_iters must be >= 1");
  if (!(tol_primal >= 0.0) || !(tol_dual >= 0.0))
    throw std::invalid_argument("AdmmControls: tolerances must be nonnegative");
}

CMatrix prox_row_l21(const CMatrix& V, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("prox_row_l21: threshold must be nonnegative");
  CMatrix out = V;
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    const double n = V.row(i).norm();
    if (n <= t)
      out.row(i).setZero();
    else
      out.row(i) *= 1.0 - t / n;
  }
  return out;
}

CMatrix prox_fro(const CMatrix& V) { return 0.5 * V; }

CMatrix prox_nuclear(const CMatrix& V, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("prox_nuclear: threshold must be nonnegative");
  if (t == 0.0 || V.size() == 0) return V;
  Eigen::BDCSVD<CMatrix> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("prox_nuclear: SVD failed");
  RVector s = (svd.singularValues().array() - t).max(0.0).matrix();
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

}  // namespace faultmimo

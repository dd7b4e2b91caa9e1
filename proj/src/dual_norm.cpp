#include <cmath>

#include "faultmimo/prox.hpp"

namespace faultmimo {

double gridded_dual_norm(const CMatrix& V, const GridOperator& op) {
  if (V.cols() == 0) return 0.0;
  return op.adjoint(V).rowwise().norm().maxCoeff();
}

double dual_atomic_norm(const CMatrix& V, int fineness) {
  const auto M = static_cast<int>(V.rows());
  if (fineness < 4 * M)
    throw std::invalid_argument("dual_atomic_norm: fineness must be at least 4*M");
  const GridOperator op(M, fineness);
  return gridded_dual_norm(V, op);
}

}  // namespace faultmimo

#include "faultmimo/metrics.hpp"

#include <cmath>

namespace faultmimo {

double normalized_error_db(const CMatrix& H, const CMatrix& H_hat) {
  if (H.rows() != H_hat.rows() || H.cols() != H_hat.cols())
    throw std::invalid_argument("normalized_error_db: shape mismatch");
  const double mse = (H - H_hat).squaredNorm() / static_cast<double>(H.size());
  if (mse <= 0.0) return kExactRecoveryDb;
  return std::max(10.0 * std::log10(mse), kExactRecoveryDb);
}

int detection_error(const std::vector<int>& s, const std::vector<int>& s_hat) {
  if (s.size() != s_hat.size()) throw std::invalid_argument("detection_error: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) d += (s[i] != 0) != (s_hat[i] != 0);
  return d;
}

double spectral_norm(const CMatrix& Z) {
  if (Z.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(Z);
  return svd.singularValues()(0);
}

double row_linf_norm(const CMatrix& Z) {
  return Z.rows() == 0 ? 0.0 : Z.rowwise().norm().maxCoeff();
}

double row_l21_norm(const CMatrix& Z) { return Z.rowwise().norm().sum(); }

double nuclear_norm(const CMatrix& Z) {
  if (Z.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(Z);
  return svd.singularValues().sum();
}

double symbol_error_rate(const std::vector<cdouble>& decisions, const std::vector<cdouble>& truth) {
  if (decisions.size() != truth.size())
    throw std::invalid_argument("symbol_error_rate: length mismatch");
  if (truth.empty()) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += std::abs(decisions[i] - truth[i]) > 1e-9;
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

}  // namespace faultmimo

#pragma once

#include <cstdint>
#include <vector>

#include "faultmimo/types.hpp"

namespace faultmimo {

struct ReceiverReport {
  CVector x_hat;
  CVector decisions;
  double per_symbol_mse = 0.0;  // ||x_hat - x||^2 for this symbol vector
};

/// Matched filter H^* y / (sqrt(rho) M).
CVector mrc(const CMatrix& H, const CVector& y, double rho);

/// MRC after deleting the rows in `omega`, normalized by the surviving row count.
CVector mrc_modified(const CMatrix& H, const CVector& y, double rho, const std::vector<int>& omega);

/// Zero forcing H^+ y / sqrt(rho). Throws NumericalError if H is rank deficient.
CVector zf(const CMatrix& H, const CVector& y, double rho);
CVector zf_modified(const CMatrix& H, const CVector& y, double rho, const std::vector<int>& omega);

/// Reusable ZF filter: factorizes once, applies to many received vectors.
class ZfFilter {
 public:
  ZfFilter(const CMatrix& H, double rho, const std::vector<int>& omega = {});
  CVector apply(const CVector& y) const;

 private:
  CMatrix pinv_;           // K x |kept|
  std::vector<int> kept_;  // surviving row indices
  double inv_sqrt_rho_;
};

/// Limit K^2/P + K/P of the modified-MRC MSE with perfect CSI.
double asymptotic_mse_mrc(int K, int P);
/// Upper bound K gamma^2 ||w||_inf^2 / rho on the MRC-vs-modified MSE gap.
double asymptotic_excess_bound(int K, double gamma, double rho, double w_inf);

/// Unit-power Gray-mapped PSK. bits.size() must be a multiple of log2(order).
std::vector<cdouble> psk_modulate(const std::vector<std::uint8_t>& bits, int order);
/// Nearest constellation point for each soft estimate.
std::vector<cdouble> psk_demodulate(const std::vector<cdouble>& x_hat, int order);
CVector psk_demodulate(const CVector& x_hat, int order);
/// Inverse of psk_modulate on exact constellation points.
std::vector<std::uint8_t> psk_to_bits(const std::vector<cdouble>& symbols, int order);

/// Builds a ReceiverReport against the transmitted vector.
ReceiverReport make_report(const CVector& x_hat, const CVector& x_true, int order);

}  // namespace faultmimo

#pragma once

#include <vector>

#include "faultmimo/types.hpp"

namespace faultmimo {

inline constexpr double kExactRecoveryDb = -300.0;

// 10 log10(||H - H_hat||_F^2 / (M K)); exact recovery maps to kExactRecoveryDb.
double normalized_error_db(const CMatrix& H, const CMatrix& H_hat);

// Hamming distance between two binary support vectors.
int detection_error(const std::vector<int>& s, const std::vector<int>& s_hat);

double spectral_norm(const CMatrix& Z);
// ||Z||_{2,inf}: largest row Euclidean norm.
double row_linf_norm(const CMatrix& Z);
// ||Z||_{2,1}: sum of row Euclidean norms.
double row_l21_norm(const CMatrix& Z);
double nuclear_norm(const CMatrix& Z);

double symbol_error_rate(const std::vector<cdouble>& decisions, const std::vector<cdouble>& truth);

}  // namespace faultmimo

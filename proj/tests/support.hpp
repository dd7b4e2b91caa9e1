#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "faultmimo/rng.hpp"
#include "faultmimo/types.hpp"

namespace testing_support {

using faultmimo::CMatrix;
using faultmimo::CVector;
using faultmimo::cdouble;
using faultmimo::kPi;

inline CMatrix random_matrix(faultmimo::Rng& rng, Eigen::Index r, Eigen::Index c, double var = 1.0) {
  return rng.complex_normal(r, c, var);
}

// exp(j 2 pi f m), m = 0..M-1. Written out here so tests do not lean on the
// library's steering code.
inline CVector freq_vector(double f, int M) {
  CVector v(M);
  for (int m = 0; m < M; ++m) v(m) = std::polar(1.0, 2.0 * kPi * f * m);
  return v;
}

// Unit atom a(f) u^* / sqrt(M); u is normalized here.
inline CMatrix atom(double f, const CVector& u, int M) {
  return freq_vector(f, M) * u.normalized().adjoint() / std::sqrt(static_cast<double>(M));
}

inline CVector random_unit(faultmimo::Rng& rng, int K) {
  CVector u = rng.complex_normal(K, 1, 1.0);
  return u.normalized();
}

// Dense M x N grid dictionary with columns a(i/N)/sqrt(M).
inline CMatrix dense_grid(int M, int N) {
  CMatrix F(M, N);
  for (int i = 0; i < N; ++i) F.col(i) = freq_vector(static_cast<double>(i) / N, M) / std::sqrt(double(M));
  return F;
}

// Checks g(x) <= g(x + eps d) + slack for `count` random unit directions and
// each eps. Returns the worst violation (<= 0 means the certificate holds).
inline double descent_violation(const std::function<double(const CMatrix&)>& g, const CMatrix& x,
                                faultmimo::Rng& rng, int count = 50,
                                std::vector<double> eps = {1e-3, 1e-2}) {
  const double gx = g(x);
  double worst = -1e300;
  for (int i = 0; i < count; ++i) {
    CMatrix d = rng.complex_normal(x.rows(), x.cols(), 1.0);
    d /= d.norm();
    for (double e : eps) worst = std::max(worst, gx - g(x + e * d));
  }
  return worst;
}

}  // namespace testing_support

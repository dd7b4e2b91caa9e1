#include "faultmimo/receivers.hpp"

#include <algorithm>
#include <cmath>

namespace faultmimo {

namespace {

std::vector<int> kept_rows(Eigen::Index M, const std::vector<int>& omega) {
  std::vector<char> drop(static_cast<std::size_t>(M), 0);
  for (int i : omega) {
    if (i < 0 || i >= M) throw std::invalid_argument("receiver: fault index out of range");
    drop[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<int> kept;
  for (Eigen::Index i = 0; i < M; ++i)
    if (!drop[static_cast<std::size_t>(i)]) kept.push_back(static_cast<int>(i));
  if (kept.empty()) throw std::invalid_argument("receiver: every antenna is excluded");
  return kept;
}

CMatrix select_rows(const CMatrix& H, const std::vector<int>& rows) {
  CMatrix out(static_cast<Eigen::Index>(rows.size()), H.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = H.row(rows[r]);
  return out;
}

CVector select_rows(const CVector& y, const std::vector<int>& rows) {
  CVector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Eigen::Index>(r)) = y(rows[r]);
  return out;
}

int bits_per_symbol(int order) {
  switch (order) {
    case 2: return 1;
    case 4: return 2;
    case 8: return 3;
    default: throw std::invalid_argument("PSK order must be 2, 4 or 8");
  }
}

unsigned gray(unsigned i) { return i ^ (i >> 1); }

unsigned gray_inverse(unsigned g) {
  unsigned i = 0;
  for (; g; g >>= 1) i ^= g;
  return i;
}

cdouble psk_point(unsigned index, int order) {
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(index) / order);
}

unsigned nearest_index(cdouble z, int order) {
  double ang = std::arg(z);
  if (ang < 0) ang += 2.0 * kPi;
  const auto idx = static_cast<long>(std::lround(ang * order / (2.0 * kPi)));
  return static_cast<unsigned>(idx % order);
}

}  // namespace

CVector mrc(const CMatrix& H, const CVector& y, double rho) {
  if (H.rows() != y.size()) throw std::invalid_argument("mrc: dimension mismatch");
  return H.adjoint() * y / (std::sqrt(rho) * static_cast<double>(H.rows()));
}

CVector mrc_modified(const CMatrix& H, const CVector& y, double rho, const std::vector<int>& omega) {
  if (H.rows() != y.size()) throw std::invalid_argument("mrc_modified: dimension mismatch");
  const auto kept = kept_rows(H.rows(), omega);
  const CMatrix Hb = select_rows(H, kept);
  const CVector yb = select_rows(y, kept);
  // (1 - gamma) M is the surviving row count.
  return Hb.adjoint() * yb / (std::sqrt(rho) * static_cast<double>(kept.size()));
}

ZfFilter::ZfFilter(const CMatrix& H, double rho, const std::vector<int>& omega)
    : kept_(kept_rows(H.rows(), omega)), inv_sqrt_rho_(1.0 / std::sqrt(rho)) {
  const CMatrix Hb = select_rows(H, kept_);
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
  cod.setThreshold(1e-10);
  cod.compute(Hb);
  if (cod.rank() < Hb.cols()) throw NumericalError("zf: channel matrix is rank deficient");
  pinv_ = cod.pseudoInverse();
}

CVector ZfFilter::apply(const CVector& y) const {
  return inv_sqrt_rho_ * (pinv_ * select_rows(y, kept_));
}

CVector zf(const CMatrix& H, const CVector& y, double rho) {
  if (H.rows() != y.size()) throw std::invalid_argument("zf: dimension mismatch");
  return ZfFilter(H, rho).apply(y);
}

CVector zf_modified(const CMatrix& H, const CVector& y, double rho, const std::vector<int>& omega) {
  if (H.rows() != y.size()) throw std::invalid_argument("zf_modified: dimension mismatch");
  return ZfFilter(H, rho, omega).apply(y);
}

double asymptotic_mse_mrc(int K, int P) {
  if (P <= 0) throw std::invalid_argument("asymptotic_mse_mrc: P must be positive");
  return static_cast<double>(K) * K / P + static_cast<double>(K) / P;
}

double asymptotic_excess_bound(int K, double gamma, double rho, double w_inf) {
  return K * gamma * gamma * w_inf * w_inf / rho;
}

std::vector<cdouble> psk_modulate(const std::vector<std::uint8_t>& bits, int order) {
  const int b = bits_per_symbol(order);
  if (bits.size() % static_cast<std::size_t>(b) != 0)
    throw std::invalid_argument("psk_modulate: bit count is not a multiple of log2(order)");
  std::vector<cdouble> out;
  out.reserve(bits.size() / static_cast<std::size_t>(b));
  for (std::size_t i = 0; i < bits.size(); i += static_cast<std::size_t>(b)) {
    unsigned word = 0;
    for (int j = 0; j < b; ++j) word = (word << 1) | (bits[i + static_cast<std::size_t>(j)] & 1u);
    // Adjacent constellation points differ in one bit.
    out.push_back(psk_point(gray_inverse(word), order));
  }
  return out;
}

std::vector<cdouble> psk_demodulate(const std::vector<cdouble>& x_hat, int order) {
  bits_per_symbol(order);
  std::vector<cdouble> out(x_hat.size());
  std::transform(x_hat.begin(), x_hat.end(), out.begin(),
                 [order](cdouble z) { return psk_point(nearest_index(z, order), order); });
  return out;
}

CVector psk_demodulate(const CVector& x_hat, int order) {
  bits_per_symbol(order);
  CVector out(x_hat.size());
  for (Eigen::Index i = 0; i < x_hat.size(); ++i) out(i) = psk_point(nearest_index(x_hat(i), order), order);
  return out;
}

std::vector<std::uint8_t> psk_to_bits(const std::vector<cdouble>& symbols, int order) {
  const int b = bits_per_symbol(order);
  std::vector<std::uint8_t> bits;
  bits.reserve(symbols.size() * static_cast<std::size_t>(b));
  for (cdouble z : symbols) {
    const unsigned word = gray(nearest_index(z, order));
    for (int j = b - 1; j >= 0; --j) bits.push_back(static_cast<std::uint8_t>((word >> j) & 1u));
  }
  return bits;
}

ReceiverReport make_report(const CVector& x_hat, const CVector& x_true, int order) {
  ReceiverReport r;
  r.x_hat = x_hat;
  r.decisions = psk_demodulate(x_hat, order);
  r.per_symbol_mse = (x_hat - x_true).squaredNorm();
  return r;
}

}  // namespace faultmimo

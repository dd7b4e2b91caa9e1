#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "faultmimo/prox.hpp"

namespace faultmimo {

namespace {
// The FFTW planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cdouble* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

struct GridOperator::Plans {
  fftw_plan forward_dft = nullptr;   // e^{-j 2 pi i n / N}
  fftw_plan backward_dft = nullptr;  // e^{+j 2 pi i n / N}

  explicit Plans(int N) {
    CVector in(N), out(N);
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_dft = fftw_plan_dft_1d(N, as_fftw(in.data()), as_fftw(out.data()), FFTW_FORWARD, flags);
    backward_dft =
        fftw_plan_dft_1d(N, as_fftw(in.data()), as_fftw(out.data()), FFTW_BACKWARD, flags);
    if (!forward_dft || !backward_dft) throw NumericalError("GridOperator: FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward_dft) fftw_destroy_plan(forward_dft);
    if (backward_dft) fftw_destroy_plan(backward_dft);
  }
};

GridOperator::GridOperator(int M, int N) : M_(M), N_(N) {
  if (M < 1) throw std::invalid_argument("GridOperator: M must be positive");
  if (N < M) throw std::invalid_argument("GridOperator: grid size N must be at least M");
  plans_ = std::make_unique<Plans>(N);
}

GridOperator::~GridOperator() = default;
GridOperator::GridOperator(GridOperator&&) noexcept = default;
GridOperator& GridOperator::operator=(GridOperator&&) noexcept = default;

CMatrix GridOperator::forward(const CMatrix& G) const {
  if (G.rows() != N_) throw std::invalid_argument("GridOperator::forward: expected N rows");
  const double scale = 1.0 / std::sqrt(static_cast<double>(M_));
  CMatrix out(M_, G.cols());
  CVector in(N_), buf(N_);
  for (Eigen::Index k = 0; k < G.cols(); ++k) {
    in = G.col(k);
    fftw_execute_dft(plans_->backward_dft, as_fftw(in.data()), as_fftw(buf.data()));
    out.col(k) = scale * buf.head(M_);
  }
  return out;
}

CMatrix GridOperator::adjoint(const CMatrix& V) const {
  if (V.rows() != M_) throw std::invalid_argument("GridOperator::adjoint: expected M rows");
  const double scale = 1.0 / std::sqrt(static_cast<double>(M_));
  CMatrix out(N_, V.cols());
  CVector in(N_), buf(N_);
  for (Eigen::Index k = 0; k < V.cols(); ++k) {
    in.setZero();
    in.head(M_) = V.col(k);
    fftw_execute_dft(plans_->forward_dft, as_fftw(in.data()), as_fftw(buf.data()));
    out.col(k) = scale * buf;
  }
  return out;
}

}  // namespace faultmimo

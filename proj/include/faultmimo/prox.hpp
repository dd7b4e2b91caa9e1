#pragma once

#include <memory>
#include <vector>

#include "faultmimo/types.hpp"

namespace faultmimo {

struct AdmmControls {
  double penalty = 1.0;
  int max_iters = 200;
  double tol_primal = 1e-5;
  double tol_dual = 1e-5;
  // Residual balancing: double/halve the penalty when one residual dominates.
  // Applied every 10th iteration and only during the first `adapt_window`
  // iterations, so the tail runs at fixed penalty.
  bool adaptive_penalty = true;
  int adapt_window = 500;

  bool adapt_now(int iter) const {
    return adaptive_penalty && iter <= adapt_window && iter % 10 == 0;
  }

  void validate() const;
};

// ---------------------------------------------------------------------------
// Closed-form proximal maps
// ---------------------------------------------------------------------------

/// argmin_W t ||W||_{2,1} + 1/2 ||W - V||_F^2: each row scaled by (1 - t/||row||)_+.
/// t may be +inf, which zeroes every row.
CMatrix prox_row_l21(const CMatrix& V, double t);

/// argmin_N 1/2 ||N||_F^2 + 1/2 ||N - V||_F^2 = V / 2.
CMatrix prox_fro(const CMatrix& V);

/// Singular value soft-thresholding. Throws NumericalError if the SVD fails.
CMatrix prox_nuclear(const CMatrix& V, double t);

// ---------------------------------------------------------------------------
// Continuous atomic norm through the Toeplitz SDP
//
//   min_{a,B,H}  t/2 (Tr T(a) + Tr B) + 1/2 ||H - V||_F^2
//   s.t.         [T(a) H; H^* B] >= 0
//
// solved by ADMM on the split Theta(a,B,H) = Q, Q in the PSD cone. With
// atoms a(f) u^* / sqrt(M), 1/2 (Tr T + Tr B) at the optimum of the fixed-H
// problem equals ||H||_A with no extra constants.
// ---------------------------------------------------------------------------

struct SdpState {
  CVector a;       // Toeplitz generator, first column of T(a)
  CMatrix B;       // K x K
  CMatrix Q;       // (M+K) x (M+K) PSD consensus copy
  CMatrix Lambda;  // dual for Theta = Q
  CMatrix H;       // M x K
  double penalty = 1.0;

  bool initialized() const { return Q.size() > 0; }
  void reset() { *this = SdpState{}; }
  // Assembles [T(a) H; H^* B].
  CMatrix block() const;
};

struct SdpProxResult {
  CMatrix H;
  std::vector<double> objective_trace;
  double atomic_value = 0.0;  // 1/2 (Tr T(a) + Tr B) at exit
  int iterations = 0;
  bool converged = false;
};

/// Hermitian Toeplitz matrix with first column a (a(0) is taken real).
CMatrix hermitian_toeplitz(const CVector& a);

/// Prox of t ||.||_A. Pass `warm` to start from (and update) a previous state.
SdpProxResult prox_atomic_sdp(const CMatrix& V, double t, const AdmmControls& controls,
                              SdpState* warm = nullptr);

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||H||_A via the fixed-H SDP.
NormResult atomic_norm_sdp(const CMatrix& H, const AdmmControls& controls,
                           SdpState* final_state = nullptr);

/// Controls tuned for norm evaluation (tight tolerances, long horizon).
AdmmControls norm_eval_controls();

// ---------------------------------------------------------------------------
// Gridded atomic set: F_bar is M x N with columns a(i/N)/sqrt(M).
// ---------------------------------------------------------------------------

class GridOperator {
 public:
  GridOperator(int M, int N);
  ~GridOperator();
  GridOperator(GridOperator&&) noexcept;
  GridOperator& operator=(GridOperator&&) noexcept;
  GridOperator(const GridOperator&) = delete;
  GridOperator& operator=(const GridOperator&) = delete;

  int rows() const { return M_; }
  int grid_size() const { return N_; }
  /// Squared spectral norm ||F_bar||_2^2 = N / M.
  double lipschitz() const { return static_cast<double>(N_) / M_; }

  /// F_bar * G for G of size N x K.
  CMatrix forward(const CMatrix& G) const;
  /// F_bar^* * V for V of size M x K.
  CMatrix adjoint(const CMatrix& V) const;

 private:
  struct Plans;
  int M_;
  int N_;
  std::unique_ptr<Plans> plans_;
};

struct GridProxResult {
  CMatrix H;
  CMatrix Gbar;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
};

/// Group lasso min t ||G||_{2,1} + 1/2 ||F_bar G - V||_F^2 by accelerated
/// proximal gradient with restart; returns H = F_bar G. `warm` seeds G.
GridProxResult prox_atomic_grid(const CMatrix& V, double t, const GridOperator& op,
                                const AdmmControls& controls, const CMatrix* warm = nullptr);

/// ||H||_{A_N} = min ||G||_{2,1} s.t. F_bar G = H, by ADMM.
NormResult gridded_atomic_norm(const CMatrix& H, const GridOperator& op,
                               const AdmmControls& controls);

// ---------------------------------------------------------------------------
// Dual norms
// ---------------------------------------------------------------------------

/// max over f on a `fineness`-point grid of ||V^* a(f)||_2 / sqrt(M).
/// Lower bound on the continuous dual atomic norm. Requires fineness >= 4M.
double dual_atomic_norm(const CMatrix& V, int fineness);

/// Dual of ||.||_{A_N}: largest row norm of F_bar^* V.
double gridded_dual_norm(const CMatrix& V, const GridOperator& op);

}  // namespace faultmimo

#include <algorithm>
#include <cmath>

#include "faultmimo/prox.hpp"

namespace faultmimo {

namespace {

// Hermitian part, to keep round-off from drifting the iterates off the cone.
CMatrix hermitian_part(const CMatrix& X) { return 0.5 * (X + X.adjoint()); }

CMatrix project_psd(const CMatrix& X) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(X));
  if (es.info() != Eigen::Success) throw NumericalError("project_psd: eigendecomposition failed");
  const RVector& w = es.eigenvalues();  // ascending
  Eigen::Index first = 0;
  while (first < w.size() && w(first) <= 0.0) ++first;
  const Eigen::Index count = w.size() - first;
  if (count == 0) return CMatrix::Zero(X.rows(), X.cols());
  const CMatrix U = es.eigenvectors().rightCols(count);
  const RVector sw = w.tail(count).cwiseSqrt();
  const CMatrix Us = U * sw.asDiagonal();
  return Us * Us.adjoint();
}

// Least-squares projection of a Hermitian block onto Hermitian Toeplitz
// matrices: per-diagonal averages.
CVector toeplitz_average(const CMatrix& G) {
  const Eigen::Index M = G.rows();
  CVector a(M);
  for (Eigen::Index j = 0; j < M; ++j) {
    cdouble s = 0.0;
    for (Eigen::Index i = j; i < M; ++i) s += G(i, i - j) + std::conj(G(i - j, i));
    a(j) = s / (2.0 * static_cast<double>(M - j));
  }
  a(0) = a(0).real();
  return a;
}

struct SdpProblem {
  const CMatrix* V = nullptr;        // prox data term, or
  const CMatrix* H_fixed = nullptr;  // fixed off-diagonal block
  double t = 1.0;                    // weight on 1/2 (Tr T + Tr B)
};

void cold_start(SdpState& st, Eigen::Index M, Eigen::Index K, double penalty) {
  st.a = CVector::Zero(M);
  st.B = CMatrix::Zero(K, K);
  st.H = CMatrix::Zero(M, K);
  st.Q = CMatrix::Zero(M + K, M + K);
  st.Lambda = CMatrix::Zero(M + K, M + K);
  st.penalty = penalty;
}

struct SdpRun {
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

SdpRun run_sdp_admm(const SdpProblem& prob, const AdmmControls& ctl, SdpState& st) {
  const Eigen::Index M = st.a.size();
  const Eigen::Index K = st.B.rows();
  const Eigen::Index n = M + K;
  SdpRun run;
  CMatrix Theta(n, n);
  double rho = st.penalty;

  for (int it = 1; it <= ctl.max_iters; ++it) {
    const CMatrix G = st.Q - st.Lambda / rho;
    const double shift = prob.t / (2.0 * rho);

    if (prob.H_fixed)
      st.H = *prob.H_fixed;
    else
      st.H = (*prob.V + 2.0 * rho * G.topRightCorner(M, K)) / (1.0 + 2.0 * rho);
    st.B = hermitian_part(G.bottomRightCorner(K, K));
    st.B.diagonal().array() -= shift;
    st.a = toeplitz_average(G.topLeftCorner(M, M));
    st.a(0) -= shift;

    Theta.topLeftCorner(M, M) = hermitian_toeplitz(st.a);
    Theta.topRightCorner(M, K) = st.H;
    Theta.bottomLeftCorner(K, M) = st.H.adjoint();
    Theta.bottomRightCorner(K, K) = st.B;

    const CMatrix Q_new = project_psd(Theta + st.Lambda / rho);
    const CMatrix diff = Theta - Q_new;
    st.Lambda += rho * diff;
    const double r = diff.norm();
    const double s = rho * (Q_new - st.Q).norm();
    st.Q = Q_new;

    const double half_trace = 0.5 * (M * st.a(0).real() + st.B.trace().real());
    double obj = prob.t * half_trace;
    if (!prob.H_fixed) obj += 0.5 * (st.H - *prob.V).squaredNorm();
    run.trace.push_back(obj);
    run.iterations = it;

    const double scale_p = std::max({Theta.norm(), st.Q.norm(), 1e-12});
    const double scale_d = std::max(st.Lambda.norm(), 1e-12);
    if (r <= ctl.tol_primal * scale_p && s <= ctl.tol_dual * scale_d) {
      run.converged = true;
      break;
    }
    if (ctl.adapt_now(it)) {
      if (r > 10.0 * s)
        rho *= 2.0;
      else if (s > 10.0 * r)
        rho /= 2.0;
    }
  }
  st.penalty = rho;
  return run;
}

}  // namespace

CMatrix hermitian_toeplitz(const CVector& a) {
  const Eigen::Index M = a.size();
  CMatrix T(M, M);
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = 0; j < M; ++j)
      T(i, j) = i >= j ? a(i - j) : std::conj(a(j - i));
  for (Eigen::Index i = 0; i < M; ++i) T(i, i) = a(0).real();
  return T;
}

CMatrix SdpState::block() const {
  const Eigen::Index M = a.size();
  const Eigen::Index K = B.rows();
  CMatrix out(M + K, M + K);
  out.topLeftCorner(M, M) = hermitian_toeplitz(a);
  out.topRightCorner(M, K) = H;
  out.bottomLeftCorner(K, M) = H.adjoint();
  out.bottomRightCorner(K, K) = B;
  return out;
}

SdpProxResult prox_atomic_sdp(const CMatrix& V, double t, const AdmmControls& controls,
                              SdpState* warm) {
  if (!(t >= 0.0)) throw std::invalid_argument("prox_atomic_sdp: threshold must be nonnegative");
  controls.validate();
  SdpProxResult res;
  if (t == 0.0) {
    res.H = V;
    res.converged = true;
    return res;
  }
  SdpState local;
  SdpState& st = warm ? *warm : local;
  const Eigen::Index M = V.rows();
  const Eigen::Index K = V.cols();
  if (!st.initialized() || st.a.size() != M || st.B.rows() != K)
    cold_start(st, M, K, controls.penalty);

  SdpProblem prob;
  prob.V = &V;
  prob.t = t;
  SdpRun run = run_sdp_admm(prob, controls, st);
  res.H = st.H;
  res.objective_trace = std::move(run.trace);
  res.atomic_value = 0.5 * (M * st.a(0).real() + st.B.trace().real());
  res.iterations = run.iterations;
  res.converged = run.converged;
  return res;
}

AdmmControls norm_eval_controls() {
  AdmmControls c;
  c.max_iters = 20000;
  c.tol_primal = 1e-7;
  c.tol_dual = 1e-7;
  return c;
}

NormResult atomic_norm_sdp(const CMatrix& H, const AdmmControls& controls, SdpState* final_state) {
  controls.validate();
  NormResult out;
  if (H.norm() == 0.0) {
    out.converged = true;
    return out;
  }
  SdpState st;
  cold_start(st, H.rows(), H.cols(), controls.penalty);
  SdpProblem prob;
  prob.H_fixed = &H;
  prob.t = 1.0;
  SdpRun run = run_sdp_admm(prob, controls, st);
  out.value = 0.5 * (H.rows() * st.a(0).real() + st.B.trace().real());
  out.iterations = run.iterations;
  out.converged = run.converged;
  if (final_state) *final_state = std::move(st);
  return out;
}

}  // namespace faultmimo

#include "faultmimo/solvers.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "faultmimo/metrics.hpp"

namespace faultmimo {

std::string to_string(Method m) {
  switch (m) {
    case Method::ExAD: return "exAD";
    case Method::FsAD: return "fsAD";
    case Method::StPCP: return "stPCP";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "exAD") return Method::ExAD;
  if (name == "fsAD") return Method::FsAD;
  if (name == "stPCP") return Method::StPCP;
  throw std::invalid_argument("unknown method: " + name);
}

void SolverParams::validate(int M) const {
  if (!(tau1_scale >= 0.0 && tau1_scale <= 1.0))
    throw std::invalid_argument("SolverParams: tau1_scale must lie in [0,1]");
  if (!(tau2_scale >= 0.0)) throw std::invalid_argument("SolverParams: tau2_scale must be >= 0");
  if (method == Method::FsAD && grid_N != 0 && grid_N < M)
    throw std::invalid_argument("SolverParams: grid_N must be at least M");
  if (!(support_threshold_rel > 0.0 && support_threshold_rel < 1.0))
    throw std::invalid_argument("SolverParams: support_threshold_rel must lie in (0,1)");
  outer.validate();
  inner.validate();
}

std::vector<int> detect_faults(const CMatrix& W_hat, double threshold_rel, double abs_floor) {
  std::vector<int> s(static_cast<std::size_t>(W_hat.rows()), 0);
  if (W_hat.rows() == 0) return s;
  const RVector norms = W_hat.rowwise().norm();
  const double peak = norms.maxCoeff();
  if (peak == 0.0) return s;
  const double thr = std::max(threshold_rel * peak, abs_floor);
  for (Eigen::Index i = 0; i < norms.size(); ++i) s[static_cast<std::size_t>(i)] = norms(i) > thr;
  return s;
}

namespace {

// H-update backend: returns the new H and the regularizer value it attains.
class HProx {
 public:
  HProx(const SolverParams& p, Eigen::Index M, Eigen::Index K) : params_(p) {
    if (p.method == Method::FsAD) {
      const int N = p.grid_N > 0 ? p.grid_N : static_cast<int>(M * K);
      grid_.emplace(static_cast<int>(M), N);
    }
  }

  CMatrix apply(const CMatrix& V, double t, double& reg_value, bool& inner_ok) {
    switch (params_.method) {
      case Method::ExAD: {
        auto r = prox_atomic_sdp(V, t, params_.inner, &sdp_state_);
        inner_ok = inner_ok && r.converged;
        reg_value = t == 0.0 ? 0.0 : r.atomic_value;
        return r.H;
      }
      case Method::FsAD: {
        auto r = prox_atomic_grid(V, t, *grid_, params_.inner, gbar_.size() ? &gbar_ : nullptr);
        inner_ok = inner_ok && r.converged;
        reg_value = row_l21_norm(r.Gbar);
        gbar_ = std::move(r.Gbar);
        return r.H;
      }
      case Method::StPCP: {
        CMatrix H = prox_nuclear(V, t);
        reg_value = nuclear_norm(H);
        return H;
      }
    }
    return V;
  }

 private:
  const SolverParams& params_;
  SdpState sdp_state_;
  std::optional<GridOperator> grid_;
  CMatrix gbar_;
};

}  // namespace

EstimationResult decompose(const Observation& obs, const SolverParams& params) {
  const CMatrix& Z = obs.Z;
  if (!Z.allFinite()) throw std::invalid_argument("decompose: Z has non-finite entries");
  const Eigen::Index M = Z.rows();
  const Eigen::Index K = Z.cols();
  params.validate(static_cast<int>(M));

  EstimationResult res;
  res.tau1 = params.tau1_scale * spectral_norm(Z);
  res.tau2 = std::isinf(params.tau2_scale) ? std::numeric_limits<double>::infinity()
                                           : params.tau2_scale * row_linf_norm(Z);

  CMatrix H = CMatrix::Zero(M, K);
  CMatrix W = CMatrix::Zero(M, K);
  CMatrix N = CMatrix::Zero(M, K);
  CMatrix U = CMatrix::Zero(M, K);
  const CMatrix Z3 = Z / 3.0;
  const double z_norm = Z.norm();
  HProx hprox(params, M, K);

  for (int k = 1; k <= params.outer.max_iters; ++k) {
    const CMatrix Xbar = (H + W + N) / 3.0;
    const CMatrix common = Z3 - Xbar - U;
    const CMatrix V1 = H + common;
    const CMatrix V2 = W + common;
    const CMatrix V3 = N + common;

    double reg_h = 0.0;
    CMatrix H_new = hprox.apply(V1, res.tau1, reg_h, res.inner_converged);
    CMatrix W_new = prox_row_l21(V2, res.tau2);
    CMatrix N_new = prox_fro(V3);

    const double dual = std::sqrt((H_new - H).squaredNorm() + (W_new - W).squaredNorm() +
                                  (N_new - N).squaredNorm());
    H = std::move(H_new);
    W = std::move(W_new);
    N = std::move(N_new);
    const CMatrix Xbar_new = (H + W + N) / 3.0;
    U += Xbar_new - Z3;

    const double primal = (H + W + N - Z).norm();
    const double reg_w = std::isinf(res.tau2) ? 0.0 : res.tau2 * row_l21_norm(W);
    // Objective at the feasible point N = Z - H - W.
    res.objective_trace.push_back(0.5 * (Z - H - W).squaredNorm() + res.tau1 * reg_h + reg_w);
    res.outer_iterations = k;

    if (primal <= params.outer.tol_primal * z_norm && dual <= params.outer.tol_dual * z_norm) {
      res.converged = true;
      break;
    }
  }

  res.H_hat = std::move(H);
  res.W_hat = std::move(W);
  res.N_hat = std::move(N);
  const double floor = params.support_noise_floor * std::sqrt(static_cast<double>(K) * obs.noise_var);
  res.detected_support = detect_faults(res.W_hat, params.support_threshold_rel, floor);
  return res;
}

}  // namespace faultmimo

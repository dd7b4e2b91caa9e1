#include <cmath>

#include "faultmimo/metrics.hpp"
#include "faultmimo/prox.hpp"

namespace faultmimo {

GridProxResult prox_atomic_grid(const CMatrix& V, double t, const GridOperator& op,
                                const AdmmControls& controls, const CMatrix* warm) {
  if (!(t >= 0.0)) throw std::invalid_argument("prox_atomic_grid: threshold must be nonnegative");
  if (V.rows() != op.rows()) throw std::invalid_argument("prox_atomic_grid: row mismatch");
  controls.validate();
  const double step = 1.0 / op.lipschitz();  // M / N
  GridProxResult res;

  if (t == 0.0) {
    // Minimum-norm exact fit; F_bar F_bar^* = (N/M) I makes this closed form.
    res.Gbar = step * op.adjoint(V);
    res.H = op.forward(res.Gbar);
    res.converged = true;
    return res;
  }

  const Eigen::Index N = op.grid_size();
  const Eigen::Index K = V.cols();
  CMatrix G = (warm && warm->rows() == N && warm->cols() == K) ? *warm : CMatrix::Zero(N, K);
  CMatrix FG = op.forward(G);
  auto objective = [&](const CMatrix& g, const CMatrix& fg) {
    return t * row_l21_norm(g) + 0.5 * (fg - V).squaredNorm();
  };
  double obj = objective(G, FG);
  CMatrix Y = G;
  CMatrix FY = FG;
  double momentum = 1.0;

  for (int it = 1; it <= controls.max_iters; ++it) {
    const CMatrix grad = op.adjoint(FY - V);
    CMatrix G_new = prox_row_l21(Y - step * grad, t * step);
    CMatrix FG_new = op.forward(G_new);
    const double obj_new = objective(G_new, FG_new);
    res.iterations = it;

    if (obj_new > obj && momentum > 1.0) {
      // Restart: drop momentum and retake a plain step from G next round.
      Y = G;
      FY = FG;
      momentum = 1.0;
      res.objective_trace.push_back(obj);
      continue;
    }

    const double change = (G_new - G).norm();
    const double scale = std::max(G_new.norm(), 1e-12);
    const double momentum_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double beta = (momentum - 1.0) / momentum_new;
    Y = G_new + beta * (G_new - G);
    FY = FG_new + beta * (FG_new - FG);
    G = std::move(G_new);
    FG = std::move(FG_new);
    obj = obj_new;
    momentum = momentum_new;
    res.objective_trace.push_back(obj);

    if (change <= controls.tol_primal * scale) {
      res.converged = true;
      break;
    }
  }
  res.Gbar = std::move(G);
  res.H = std::move(FG);
  return res;
}

NormResult gridded_atomic_norm(const CMatrix& H, const GridOperator& op,
                               const AdmmControls& controls) {
  if (H.rows() != op.rows()) throw std::invalid_argument("gridded_atomic_norm: row mismatch");
  controls.validate();
  NormResult out;
  if (H.norm() == 0.0) {
    out.converged = true;
    return out;
  }
  const double step = 1.0 / op.lipschitz();
  auto project = [&](const CMatrix& Y) -> CMatrix {
    return Y - step * op.adjoint(op.forward(Y) - H);
  };

  CMatrix G = step * op.adjoint(H);
  CMatrix X = G;
  CMatrix U = CMatrix::Zero(G.rows(), G.cols());
  double rho = controls.penalty;

  for (int it = 1; it <= controls.max_iters; ++it) {
    G = project(X - U);
    const CMatrix X_prev = X;
    X = prox_row_l21(G + U, 1.0 / rho);
    U += G - X;
    out.iterations = it;

    const double r = (G - X).norm();
    const double s = rho * (X - X_prev).norm();
    const double scale_p = std::max({G.norm(), X.norm(), 1e-12});
    const double scale_d = std::max(rho * U.norm(), 1e-12);
    if (r <= controls.tol_primal * scale_p && s <= controls.tol_dual * scale_d) {
      out.converged = true;
      break;
    }
    if (controls.adapt_now(it)) {
      // U is the scaled dual, so it rescales inversely with rho.
      if (r > 10.0 * s) {
        rho *= 2.0;
        U /= 2.0;
      } else if (s > 10.0 * r) {
        rho /= 2.0;
        U *= 2.0;
      }
    }
  }
  // G satisfies F_bar G = H exactly, so its l21 norm is a valid upper value.
  out.value = row_l21_norm(G);
  return out;
}

}  // namespace faultmimo

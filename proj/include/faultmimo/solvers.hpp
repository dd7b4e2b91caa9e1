#pragma once

#include <string>
#include <vector>

#include "faultmimo/model.hpp"
#include "faultmimo/prox.hpp"
#include "faultmimo/types.hpp"

namespace faultmimo {

enum class Method { ExAD, FsAD, StPCP };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct SolverParams {
  Method method = Method::ExAD;
  // First regularizer = tau1_scale * ||Z||_2, second = tau2_scale * ||Z||_{2,inf}.
  // tau2_scale = +inf pins W to zero.
  double tau1_scale = 0.3;
  double tau2_scale = 0.5;
  int grid_N = 0;  // fsAD grid size; 0 selects M*K
  AdmmControls outer{1.0, 100, 1e-4, 1e-4, false, 0};
  AdmmControls inner{1.0, 200, 1e-5, 1e-5, true, 500};
  double support_threshold_rel = 0.1;
  // Absolute floor on detected row norms, in units of sqrt(K) * noise std.
  double support_noise_floor = 3.0;

  void validate(int M) const;
};

struct EstimationResult {
  CMatrix H_hat;
  CMatrix W_hat;
  CMatrix N_hat;
  std::vector<int> detected_support;  // length-M 0/1 vector
  int outer_iterations = 0;
  std::vector<double> objective_trace;
  bool converged = false;
  bool inner_converged = true;  // false if any inner prox hit its iteration cap
  double tau1 = 0.0;
  double tau2 = 0.0;
};

/// Exchange-ADMM decomposition Z = H + W + N with the H-prox chosen by
/// params.method (continuous atomic SDP, gridded group lasso, or nuclear).
EstimationResult decompose(const Observation& obs, const SolverParams& params);

/// s_i = 1 iff ||W_hat row i|| > max(threshold_rel * max_j ||row j||, abs_floor).
std::vector<int> detect_faults(const CMatrix& W_hat, double threshold_rel, double abs_floor = 0.0);

}  // namespace faultmimo

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "faultmimo/model.hpp"
#include "faultmimo/solvers.hpp"

namespace faultmimo {

enum class Experiment {
  SweepAlpha,
  SweepP,
  ZeroFaults,
  RandomAoa,
  SweepBeta,
  SerVsM,
  AsymptoticCheck,
  HybridTune,
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

struct ExperimentConfig {
  Experiment experiment = Experiment::SweepAlpha;
  SystemConfig system;
  // When set, sigma2 = (P_total / (K L)) / 10^(snr_db / 10).
  std::optional<double> snr_db = 10.0;

  std::vector<std::string> methods;
  std::vector<double> grid;   // main sweep
  std::vector<double> grid2;  // beta grid (hybrid_tune only)

  // Fixed regularizer scales for whichever of alpha/beta is not swept.
  double alpha_exad = 0.3;
  double alpha_fsad = 0.2;
  double alpha_stpcp = 0.5;
  double beta = 0.5;

  SolverParams solver;  // controls and thresholds shared by all methods

  int trials = 10;
  int workers = 1;
  std::string out_dir = ".";
  int ser_samples = 10000;
  int psk_order = 8;
  int symbols = 2000;  // uplink draws per trial in asymptotic_check

  // Applies snr_db to system.sigma2. Called by the parser and by run_experiment.
  void resolve_noise();
  // Throws std::invalid_argument on the first violated constraint.
  void validate() const;
  double alpha_for(const std::string& method) const;
};

/// Defaults for one experiment: grids, methods and fixed scales.
ExperimentConfig default_config(Experiment e);

/// Flat `key = value` text, `#` starts a comment. Lists are comma separated;
/// a numeric list entry `a:step:b` expands to the inclusive range.
/// Throws std::invalid_argument on unknown keys or bad values.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Expands "0:0.05:1" or "1,2,5" into numbers.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace faultmimo

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "faultmimo/config.hpp"

namespace faultmimo {

struct ResultRow {
  std::string experiment;
  std::string method;
  double sweep_value = 0.0;
  double alpha = 0.0;  // NaN for methods without a first regularizer
  double beta = 0.0;   // NaN for methods without a second regularizer
  int trial = 0;
  std::uint64_t trial_seed = 0;
  double normalized_error_db = 0.0;
  int detection_error = 0;
  double ser = 0.0;         // NaN when the experiment has no data phase
  double mse = 0.0;         // mean ||x_hat - x||^2, asymptotic_check only
  double mean_abs_error = 0.0;  // mean ||x_hat - x||
  double mse_stderr = 0.0;
  double reference = 0.0;   // closed-form predictor for the row, NaN if none
  bool converged = true;
  int outer_iterations = 0;
  double wall_time = 0.0;   // seconds
};

struct MeanRow {
  std::string experiment;
  std::string method;
  double sweep_value = 0.0;
  int trials = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double error_db = 0.0;  // mean of per-trial dB values
  double error_db_stderr = 0.0;
  double detection_error = 0.0;
  double ser = 0.0;
  double mse = 0.0;
  double mean_abs_error = 0.0;
  double mse_stderr = 0.0;  // across trials
  double reference = 0.0;
  double converged_fraction = 0.0;
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  std::vector<MeanRow> means;
};

/// Runs the configured experiment. Cells (trial x sweep value x method) are
/// spread over `config.workers` OpenMP threads; every cell draws from its own
/// seeded stream, so the rows do not depend on the worker count.
ExperimentOutput run_experiment(const ExperimentConfig& config);

ExperimentOutput run_sweep_alpha(const ExperimentConfig& config);
ExperimentOutput run_sweep_P(const ExperimentConfig& config);
ExperimentOutput run_zero_faults(const ExperimentConfig& config);
ExperimentOutput run_random_aoa(const ExperimentConfig& config);
ExperimentOutput run_sweep_beta(const ExperimentConfig& config);
ExperimentOutput run_ser_vs_M(const ExperimentConfig& config);
ExperimentOutput run_asymptotic_check(const ExperimentConfig& config);
/// Grid search over (grid x grid2) picking the pair whose estimate is closest
/// to the MMSE estimate. Emits "<method>-hybrid" rows (selected pair) and
/// "<method>-best" rows (pair with the lowest true error) with their SER.
ExperimentOutput run_hybrid_tune(const ExperimentConfig& config);

/// Groups rows by (method, sweep value) in first-appearance order.
std::vector<MeanRow> summarize(const std::vector<ResultRow>& rows);

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                    bool include_timing = true);
void write_means_csv(std::ostream& out, const std::vector<MeanRow>& means);

/// Writes <out_dir>/<experiment>_rows.csv and <experiment>_means.csv;
/// returns the two paths.
std::vector<std::string> write_outputs(const ExperimentOutput& output, const std::string& out_dir,
                                       const std::string& experiment);

}  // namespace faultmimo

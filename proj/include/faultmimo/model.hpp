#pragma once

#include <cstdint>
#include <vector>

#include "faultmimo/rng.hpp"
#include "faultmimo/types.hpp"

namespace faultmimo {

enum class AoaMode { UniformGrid, Random };

struct SystemConfig {
  int M = 120;   // base-station antennas
  int K = 10;    // users
  int L = 10;    // pilot length
  int P = 20;    // propagation paths
  double gamma = 0.05;          // faulty fraction
  double d_over_lambda = 0.3;   // antenna spacing / wavelength
  double sigma2 = 0.1;          // additive noise variance
  double rho = 1.0;             // per-user symbol power
  double total_pilot_power = 100.0;
  AoaMode aoa_mode = AoaMode::UniformGrid;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  // S = floor(gamma * M).
  int faulty_count() const;
};

struct ChannelRealization {
  std::vector<double> angles;  // P angles of arrival, radians
  CMatrix A;                   // M x P steering matrix
  CMatrix G;                   // P x K path gains
  CMatrix H;                   // M x K channel, H = A G / sqrt(P)
};

struct FaultPattern {
  std::vector<int> support;  // sorted faulty antenna indices
  double amplitude = 4.0;    // distortion scale, 4 sqrt(rho) by default

  // Length-M indicator vector s with s_i = 1 on the support.
  std::vector<int> indicator(int M) const;
};

struct TrainingBlock {
  CMatrix pilot;  // K x L, row-orthonormal
  CMatrix X;      // sqrt(P_total / K) * pilot
  CMatrix Y;      // M x L received block
  CMatrix W0;     // M x L corruption
  CMatrix N0;     // M x L noise
};

struct Observation {
  CMatrix Z;         // M x K decorrelated observation
  double noise_var;  // K sigma^2 / P_total
};

struct UplinkSample {
  CVector x;  // K transmitted PSK symbols
  CVector y;  // M received samples
  CVector w;  // M distortion (zero outside the fault support)
};

/// ULA response exp(-j 2 pi (D/lambda) sin(theta) m), m = 0..M-1.
/// Throws std::domain_error when |theta| > pi/2.
CVector steering_vector(double theta, int M, double d_over_lambda);

/// Spatial frequency f in [0,1) with steering_vector(theta) = exp(j 2 pi f m).
double angle_to_frequency(double theta, double d_over_lambda);

/// P angles per the configured AoA mode. UniformGrid gives -pi/2 + p pi / P.
std::vector<double> sample_angles(const SystemConfig& config, Rng& rng);

/// Builds A from the angles and H = A G / sqrt(P).
ChannelRealization make_channel(const std::vector<double>& angles, const CMatrix& G,
                                int M, double d_over_lambda);

ChannelRealization sample_channel(const SystemConfig& config, Rng& rng);

/// K distinct rows of the L-point normalized DFT; Phi Phi^* = I.
CMatrix make_pilot(int K, int L);

FaultPattern sample_fault_pattern(const SystemConfig& config, Rng& rng);

TrainingBlock simulate_training(const ChannelRealization& channel, const CMatrix& pilot,
                                const FaultPattern& faults, const SystemConfig& config,
                                Rng& rng);

/// Right-multiplies an M x L block by Phi^* / sqrt(P_total / K).
CMatrix decorrelate_block(const CMatrix& block, const CMatrix& pilot, double total_pilot_power);

Observation decorrelate(const TrainingBlock& block, const SystemConfig& config);

/// Uplink data phase y = sqrt(rho) H x + w + n with unit-variance noise.
/// w is redrawn per symbol on the fixed fault support with i.i.d. +-amplitude
/// entries, the same law as the training corruption.
std::vector<UplinkSample> simulate_uplink(const ChannelRealization& channel,
                                          const FaultPattern& faults, double rho, int T,
                                          int psk_order, Rng& rng);

}  // namespace faultmimo

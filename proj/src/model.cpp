#include "faultmimo/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace faultmimo {

void SystemConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("SystemConfig: " + msg); };
  if (M < 1) fail("M must be positive");
  if (K < 1) fail("K must be positive");
  if (K > M) fail("K must not exceed M");
  if (L < K) fail("L must be at least K");
  if (P < 1) fail("P must be positive");
  if (P >= M) fail("P must be smaller than M");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must lie in [0,1]");
  if (!(d_over_lambda > 0.0 && d_over_lambda < 1.0)) fail("d_over_lambda must lie in (0,1)");
  if (!(sigma2 >= 0.0)) fail("sigma2 must be nonnegative");
  if (!(rho > 0.0)) fail("rho must be positive");
  if (!(total_pilot_power > 0.0)) fail("total_pilot_power must be positive");
}

int SystemConfig::faulty_count() const {
  // Guard against gamma*M landing a hair below an integer.
  return static_cast<int>(std::floor(gamma * M + 1e-9));
}

std::vector<int> FaultPattern::indicator(int M) const {
  std::vector<int> s(static_cast<std::size_t>(M), 0);
  for (int i : support) s.at(static_cast<std::size_t>(i)) = 1;
  return s;
}

CVector steering_vector(double theta, int M, double d_over_lambda) {
  if (!(std::abs(theta) <= kPi / 2 + 1e-12))
    throw std::domain_error("steering_vector: angle outside [-pi/2, pi/2]");
  if (M < 1) throw std::invalid_argument("steering_vector: M must be positive");
  const double phase = -2.0 * kPi * d_over_lambda * std::sin(theta);
  CVector a(M);
  for (int m = 0; m < M; ++m) a(m) = std::polar(1.0, phase * m);
  return a;
}

double angle_to_frequency(double theta, double d_over_lambda) {
  double f = -d_over_lambda * std::sin(theta);
  f -= std::floor(f);
  return f >= 1.0 ? 0.0 : f;
}

std::vector<double> sample_angles(const SystemConfig& config, Rng& rng) {
  std::vector<double> angles(static_cast<std::size_t>(config.P));
  for (int p = 0; p < config.P; ++p) {
    angles[p] = config.aoa_mode == AoaMode::UniformGrid
                    ? -kPi / 2 + p * kPi / config.P
                    : rng.uniform(-kPi / 2, kPi / 2);
  }
  return angles;
}

ChannelRealization make_channel(const std::vector<double>& angles, const CMatrix& G, int M,
                                double d_over_lambda) {
  const auto P = static_cast<Eigen::Index>(angles.size());
  if (G.rows() != P) throw std::invalid_argument("make_channel: G must have P rows");
  ChannelRealization ch;
  ch.angles = angles;
  ch.A.resize(M, P);
  for (Eigen::Index p = 0; p < P; ++p) ch.A.col(p) = steering_vector(angles[p], M, d_over_lambda);
  ch.G = G;
  ch.H = ch.A * G / std::sqrt(static_cast<double>(P));
  return ch;
}

ChannelRealization sample_channel(const SystemConfig& config, Rng& rng) {
  config.validate();
  auto angles = sample_angles(config, rng);
  CMatrix G = rng.complex_normal(config.P, config.K, 1.0);
  return make_channel(angles, G, config.M, config.d_over_lambda);
}

CMatrix make_pilot(int K, int L) {
  if (K < 1) throw std::invalid_argument("make_pilot: K must be positive");
  if (L < K) throw std::invalid_argument("make_pilot: L must be at least K");
  CMatrix phi(K, L);
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < L; ++l) {
      // Reduce k*l mod L before the trig call so the phases stay exact.
      const long idx = (static_cast<long>(k) * l) % L;
      phi(k, l) = std::polar(scale, -2.0 * kPi * static_cast<double>(idx) / L);
    }
  return phi;
}

FaultPattern sample_fault_pattern(const SystemConfig& config, Rng& rng) {
  config.validate();
  const int S = config.faulty_count();
  std::vector<int> idx(static_cast<std::size_t>(config.M));
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first S entries are a uniform S-subset.
  for (int i = 0; i < S; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.index(static_cast<std::size_t>(config.M - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
  }
  FaultPattern fp;
  fp.support.assign(idx.begin(), idx.begin() + S);
  std::sort(fp.support.begin(), fp.support.end());
  fp.amplitude = 4.0 * std::sqrt(config.rho);
  return fp;
}

TrainingBlock simulate_training(const ChannelRealization& channel, const CMatrix& pilot,
                                const FaultPattern& faults, const SystemConfig& config,
                                Rng& rng) {
  const Eigen::Index M = channel.H.rows();
  const Eigen::Index K = channel.H.cols();
  if (pilot.rows() != K || M != config.M || K != config.K || pilot.cols() != config.L)
    throw std::invalid_argument("simulate_training: dimension mismatch");
  for (int i : faults.support)
    if (i < 0 || i >= M) throw std::invalid_argument("simulate_training: fault index out of range");

  TrainingBlock tb;
  tb.pilot = pilot;
  tb.X = std::sqrt(config.total_pilot_power / K) * pilot;
  const Eigen::Index L = pilot.cols();
  tb.W0 = CMatrix::Zero(M, L);
  for (int i : faults.support)
    for (Eigen::Index l = 0; l < L; ++l)
      tb.W0(i, l) = rng.coin() ? faults.amplitude : -faults.amplitude;
  tb.N0 = rng.complex_normal(M, L, config.sigma2);
  tb.Y = channel.H * tb.X + tb.W0 + tb.N0;
  return tb;
}

CMatrix decorrelate_block(const CMatrix& block, const CMatrix& pilot, double total_pilot_power) {
  const double K = static_cast<double>(pilot.rows());
  return block * pilot.adjoint() / std::sqrt(total_pilot_power / K);
}

Observation decorrelate(const TrainingBlock& block, const SystemConfig& config) {
  Observation obs;
  obs.Z = decorrelate_block(block.Y, block.pilot, config.total_pilot_power);
  obs.noise_var = config.K * config.sigma2 / config.total_pilot_power;
  return obs;
}

std::vector<UplinkSample> simulate_uplink(const ChannelRealization& channel,
                                          const FaultPattern& faults, double rho, int T,
                                          int psk_order, Rng& rng) {
  if (T < 1) throw std::invalid_argument("simulate_uplink: T must be positive");
  if (psk_order != 2 && psk_order != 4 && psk_order != 8)
    throw std::invalid_argument("simulate_uplink: psk_order must be 2, 4 or 8");
  const Eigen::Index M = channel.H.rows();
  const Eigen::Index K = channel.H.cols();
  const double sr = std::sqrt(rho);
  std::vector<UplinkSample> out(static_cast<std::size_t>(T));
  for (auto& s : out) {
    s.x.resize(K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto idx = rng.index(static_cast<std::size_t>(psk_order));
      s.x(k) = std::polar(1.0, 2.0 * kPi * static_cast<double>(idx) / psk_order);
    }
    s.w = CVector::Zero(M);
    for (int i : faults.support) s.w(i) = rng.coin() ? faults.amplitude : -faults.amplitude;
    CVector n(M);
    for (Eigen::Index m = 0; m < M; ++m) n(m) = rng.complex_normal(1.0);
    s.y = sr * (channel.H * s.x) + s.w + n;
  }
  return out;
}

}  // namespace faultmimo

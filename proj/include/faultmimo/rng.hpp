#pragma once

#include <cstdint>
#include <random>

#include "faultmimo/types.hpp"

namespace faultmimo {

// Mixes a master seed with stream coordinates into an independent 64-bit seed.
// Same inputs always give the same seed, so each (trial, cell) owns a
// reproducible substream regardless of which thread runs it.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t substream = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream, std::uint64_t substream = 0)
      : engine_(derive_seed(master, stream, substream)) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  bool coin() { return (engine_() >> 63) != 0; }
  std::uint64_t next() { return engine_(); }
  // Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cdouble complex_normal(double variance = 1.0);
  CMatrix complex_normal(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace faultmimo

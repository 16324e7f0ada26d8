#pragma once

#include <cstdint>
#include <random>

#include "proxeq/linalg.hpp"

namespace proxeq {

// Deterministic random source. std::mt19937_64 output is specified by the
// standard, but std::normal_distribution is not, so normal draws go through
// our own Box-Muller transform to keep streams identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform();

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller; caches the second value of each pair.
  double normal();

  Vector normal_vector(std::size_t n);

  // Draw from N(mean, cov) given a precomputed factor L with L*L^T = cov
  // (e.g. matrix_sqrt_psd of the covariance).
  Vector gaussian_vector(const Vector& mean, const Matrix& cov_factor);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace proxeq

#include "proxeq/rng.hpp"

#include <cmath>

namespace proxeq {

double Rng::uniform() {
  // 53-bit mantissa from the top bits of the 64-bit output.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Vector Rng::normal_vector(std::size_t n) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Vector Rng::gaussian_vector(const Vector& mean, const Matrix& cov_factor) {
  Vector z = normal_vector(cov_factor.cols());
  Vector x = matvec(cov_factor, z);
  return mean + x;
}

}  // namespace proxeq

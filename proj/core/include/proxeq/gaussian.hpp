#pragma once

#include <string>

#include "proxeq/linalg.hpp"

namespace proxeq {

// Multivariate Gaussian N(mean, cov). The covariance must be symmetric
// within 1e-12 (relative) and have eigenvalues >= -1e-10; small negative
// eigenvalues are tolerated as data (rank-deficient pushforwards produce
// them) but log_density refuses anything that is not strictly positive
// definite.
struct Gaussian {
  Vector mean;
  Matrix cov;

  Gaussian(Vector mean_in, Matrix cov_in);

  std::size_t dim() const { return mean.size(); }

  static Gaussian standard(std::size_t d);
  static Gaussian isotropic(std::size_t d, double var);
};

enum class SpectralBound { kMaxSingularValueAtMost, kMinSingularValueAtLeast };

struct SpectralConstraint {
  SpectralBound kind = SpectralBound::kMaxSingularValueAtMost;
  double bound = 1.0;  // must be > 0

  void validate() const;
  bool satisfied(const Matrix& w, double tol = 1e-9) const;
};

// Frobenius-nearest matrix satisfying the constraint, obtained by clipping
// singular values at the bound.
Matrix project_spectral(const Matrix& w, const SpectralConstraint& c);

// Law of W*X + u for X ~ g: N(u + W*mean, W*cov*W^T). W may be rectangular;
// the result covariance can be rank deficient.
Gaussian gaussian_pushforward(const Gaussian& g, const Matrix& w, const Vector& u);

// Log density at x. Throws std::domain_error("degenerate Gaussian ...") if the
// covariance has an eigenvalue <= 1e-10.
double log_density(const Gaussian& g, const Vector& x);

}  // namespace proxeq

#include "proxeq/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace proxeq {

Gaussian::Gaussian(Vector mean_in, Matrix cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (mean.size() == 0) throw std::invalid_argument("Gaussian: empty mean");
  if (cov.rows() != mean.size() || cov.cols() != mean.size())
    throw std::invalid_argument("Gaussian: covariance shape does not match mean");
  if (!mean.all_finite() || !cov.all_finite())
    throw std::invalid_argument("Gaussian: non-finite entries");
  if (!is_symmetric(cov, 1e-12))
    throw std::invalid_argument("Gaussian: covariance not symmetric within 1e-12");
  cov = symmetrize(cov);
  const SymEig eig = sym_eig(cov);
  if (eig.values[0] < -1e-10)
    throw std::invalid_argument("Gaussian: covariance eigenvalue " +
                                std::to_string(eig.values[0]) + " below -1e-10");
}

Gaussian Gaussian::standard(std::size_t d) {
  return Gaussian(Vector(d), Matrix::identity(d));
}

Gaussian Gaussian::isotropic(std::size_t d, double var) {
  return Gaussian(Vector(d), var * Matrix::identity(d));
}

void SpectralConstraint::validate() const {
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw std::invalid_argument("SpectralConstraint: bound must be positive");
}

bool SpectralConstraint::satisfied(const Matrix& w, double tol) const {
  validate();
  const Svd dec = svd(w);
  if (kind == SpectralBound::kMaxSingularValueAtMost)
    return dec.s[0] <= bound + tol;
  return dec.s[dec.s.size() - 1] >= bound - tol;
}

Matrix project_spectral(const Matrix& w, const SpectralConstraint& c) {
  c.validate();
  const Svd dec = svd(w);
  Vector clipped = dec.s;
  bool changed = false;
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    const double s = clipped[i];
    const double t = c.kind == SpectralBound::kMaxSingularValueAtMost
                         ? std::min(s, c.bound)
                         : std::max(s, c.bound);
    if (t != s) changed = true;
    clipped[i] = t;
  }
  if (!changed) return w;
  return matmul(matmul(dec.u, Matrix::diag(clipped)), transpose(dec.v));
}

Gaussian gaussian_pushforward(const Gaussian& g, const Matrix& w, const Vector& u) {
  if (w.cols() != g.dim())
    throw std::invalid_argument("gaussian_pushforward: map takes " +
                                std::to_string(w.cols()) + " dims, Gaussian has " +
                                std::to_string(g.dim()));
  if (u.size() != w.rows())
    throw std::invalid_argument("gaussian_pushforward: shift size mismatch");
  Vector mean = u + matvec(w, g.mean);
  Matrix cov = symmetrize(matmul(matmul(w, g.cov), transpose(w)));
  return Gaussian(std::move(mean), std::move(cov));
}

double log_density(const Gaussian& g, const Vector& x) {
  if (x.size() != g.dim())
    throw std::invalid_argument("log_density: point dimension mismatch");
  const SymEig eig = sym_eig(g.cov);
  if (eig.values[0] <= 1e-10)
    throw std::domain_error("degenerate Gaussian: covariance eigenvalue " +
                            std::to_string(eig.values[0]) +
                            " too small for a density");
  const std::size_t d = g.dim();
  const Vector centered = x - g.mean;
  // Solve via the eigendecomposition already in hand.
  double quad = 0.0, logdet = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double proj = 0.0;
    for (std::size_t i = 0; i < d; ++i) proj += eig.vectors(i, k) * centered[i];
    quad += proj * proj / eig.values[k];
    logdet += std::log(eig.values[k]);
  }
  return -0.5 * (d * std::log(2.0 * 3.14159265358979323846) + logdet + quad);
}

}  // namespace proxeq

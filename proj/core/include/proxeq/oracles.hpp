#pragma once

#include <utility>

#include "proxeq/discriminator.hpp"
#include "proxeq/gaussian.hpp"
#include "proxeq/quadrature.hpp"

namespace proxeq {

struct LinearMap {
  Matrix w;
  Vector u;

  Vector apply(const Vector& x) const { return u + matvec(w, x); }
};

// Exact quadratic-cost optimal transport between Gaussians, scaled by eta:
// (eta/2) (|mu_p - mu_q|^2 + tr(S_p + S_q - 2 (S_q^{1/2} S_p S_q^{1/2})^{1/2})).
double w2_gaussian(const Gaussian& p, const Gaussian& q, double eta);

// Optimal transport map from N(0, sigma^2 I) to N(u, W W^T):
// x -> (1/sigma) (W W^T)^{1/2} x + u.
LinearMap brenier_map_gaussian(double sigma, const Matrix& w, const Vector& u);

// 1-D Wasserstein-1 distance as the CDF-difference integral |F_p - F_q|.
// Refuses when either Gaussian has more than 1e-10 of its mass outside the
// quadrature window.
double w1_1d(const Gaussian& p, const Gaussian& q, const QuadratureSpec& quad);

// d_f(P, Q) = integral of p(x) f(q(x)/p(x)) dx, by tensor-grid quadrature.
// Supports dimensions 1 to 3; the window in `quad` applies per axis.
double f_divergence_quadrature(const FDivergenceSpec& spec, const Gaussian& p,
                               const Gaussian& q, const QuadratureSpec& quad);

// The pointwise maximizer of E_p[D] - E_q[f*(D)]: D(x) = f'(p(x)/q(x)), with
// the Gaussian log-ratio spelled out as an exact quadratic exponent.
LogRatioDiscriminator optimal_f_discriminator(const FDivergenceSpec& spec,
                                              const Gaussian& p, const Gaussian& q);

// E_p[D] - E_q[f*(D)] by quadrature. At the optimal discriminator above this
// equals the f-divergence with swapped arguments, d_f(Q, P); the two oracles
// cross-check each other through that pairing.
double f_variational_value(const LogRatioDiscriminator& d, const Gaussian& p,
                           const Gaussian& q, const QuadratureSpec& quad);

// D^c(x) = sup_{x'} D(x') - (eta/2)|x - x'|^2, exact for quadratics. Requires
// eta I - 2A positive definite with margin 1e-8 so the supremum is finite.
QuadraticDiscriminator c_transform_quadratic(const QuadraticDiscriminator& d, double eta);

// E(x) = inf_{x'} E(x') + (eta/2)|x - x'|^2: the inf-convolution with the
// cost. On quadratics inside the margin this inverts c_transform_quadratic
// exactly, which is the idempotence property the tests pin down.
QuadraticDiscriminator c_inf_convolution_quadratic(const QuadraticDiscriminator& d,
                                                   double eta);

// The two points where the N(0, sigma^2) density equals the N(u, w^2)
// density, found by root-finding on the log-density difference. Requires
// 0 < |w| < sigma; the density difference is then positive outside [a1, a2]
// and negative inside.
std::pair<double, double> wgan1d_density_crossings(double sigma, double w, double u);

// Same crossings without the |w| < sigma restriction; used for the narrower-
// data regime where the difference is negative outside and positive inside.
std::pair<double, double> density_crossings_1d(double sigma, double w, double u);

}  // namespace proxeq

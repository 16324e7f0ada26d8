#pragma once

#include <cstddef>
#include <string>

#include "proxeq/discriminator.hpp"
#include "proxeq/gaussian.hpp"
#include "proxeq/quadrature.hpp"

namespace proxeq {

// Affine generator x = W z + u with a spectral feasibility set on W.
struct LinearGenerator {
  Matrix w;
  Vector u;
  SpectralConstraint constraint;

  LinearGenerator(Matrix w_in, Vector u_in, SpectralConstraint constraint_in);

  std::size_t data_dim() const { return w.rows(); }
  std::size_t latent_dim() const { return w.cols(); }
  bool feasible(double tol = 1e-9) const;
  // Clips W's singular values onto the constraint set.
  void project();
};

enum class GameKind { kW2Lq, kFganGauss, kWgan1d };

// A minimax objective between isotropic Gaussian data and the law of W Z + u,
// Z standard normal. Discriminator family is fixed per kind: quadratic for
// kW2Lq, log-ratio for kFganGauss, piecewise-linear for kWgan1d.
struct Game {
  GameKind kind;
  Gaussian data;
  Gaussian latent;
  double eta = 1.0;            // quadratic transport cost scale (kW2Lq)
  FDivergenceSpec fdiv;        // divergence family (kFganGauss)
  QuadratureSpec data_quad;    // data-side integrals (kFganGauss)
  QuadratureSpec latent_quad;  // latent-side integrals (kFganGauss)

  static Game w2_lq(double sigma, std::size_t data_dim, std::size_t latent_dim,
                    double eta);
  static Game fgan_gauss(double sigma, std::size_t data_dim, std::size_t latent_dim,
                         FDivergenceSpec fdiv);
  static Game wgan_1d(double sigma);

  double sigma() const;
  // Data must be centered isotropic and the latent standard normal.
  void validate() const;
};

// Law of W Z + u under the game's latent distribution.
Gaussian generator_law(const Game& game, const LinearGenerator& g);

struct GeneratorGradient {
  Matrix w;
  Vector u;
};

// Gradient with respect to the discriminator's parameters. Field use by kind:
// kW2Lq quadratic (A, b, c) -> (a, b, c); kFganGauss log-ratio (P, q, r) ->
// (a, b, c); kWgan1d knot values -> b, tail slopes -> left_slope/right_slope.
struct DiscriminatorGradient {
  Matrix a;
  Vector b;
  double c = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
};

double value(const Game& game, const LinearGenerator& g, const Discriminator& d);

GeneratorGradient grad_generator(const Game& game, const LinearGenerator& g,
                                 const Discriminator& d);

DiscriminatorGradient grad_discriminator(const Game& game, const LinearGenerator& g,
                                         const Discriminator& d);

// The maximizing discriminator for the given generator. Closed form for kW2Lq
// and kFganGauss; for kWgan1d the unit-slope tails hang off the density
// crossings and the bridge between them is refined by projected ascent on the
// segment slopes, doubling the knot count until the value settles below 1e-6.
// Constants are anchored so the result vanishes at the origin where the
// objective is shift-invariant (kW2Lq, kWgan1d).
Discriminator best_response_disc(const Game& game, const LinearGenerator& g);

// Cross-check of the inner maximization against the independent distance
// oracles, plus the gradient-energy identity for kW2Lq.
struct DualPrimalReport {
  double dual_value = 0.0;     // value(game, g, best_response_disc(game, g))
  double oracle_value = 0.0;   // matching transport / divergence oracle
  double sobolev_value = 0.0;  // (1/2 eta) E||grad D*(X)||^2, kW2Lq only (else NaN)
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

DualPrimalReport dual_equals_primal_check(const Game& game, const LinearGenerator& g);

}  // namespace proxeq

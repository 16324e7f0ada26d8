#pragma once

#include <optional>
#include <string>

#include "proxeq/games.hpp"
#include "proxeq/sobolev.hpp"

namespace proxeq {

// Controls the inner maximization of the penalized objective
//   V(g, D~) - (lambda/2) ||D~ - d||^2
// over the game's discriminator class, where ||.|| is the sample-averaged
// gradient semi-norm.
struct ProximalConfig {
  double lambda = 1.0;
  int inner_max_iters = 2000;
  // Convergence when the unit-step projected gradient residual drops below
  // this: ||project(params + grad) - params||.
  double inner_tol = 1e-8;
  // Fixed ascent step when set; adaptive (growing/backtracking) otherwise.
  std::optional<double> inner_step;

  void validate() const;
};

// Sufficient condition for the inner problem to be strongly concave:
// the penalty's parameter-space Hessian dominates the value's curvature.
// eta1 is the strong-convexity modulus of ||D~ - d||^2 in the trained
// parameters, eta2 a bound on the value's parameter Hessian norm, and the
// inner objective is (lambda eta1 / 2 - eta2)-strongly concave when that
// margin is positive. Strong convexity of the penalty is meant in the
// standard sense, h(y) >= h(x) + <grad h(x), y - x> + (eta1/2)||y - x||^2.
struct StrongConcavityCertificate {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double margin = 0.0;
  std::string note;

  bool valid() const { return margin > 0.0; }
};

struct ProxResult {
  double value = 0.0;
  Discriminator d_tilde;
  int iterations = 0;
  double residual = 0.0;
};

// Inner maximum and its maximizer, solved by projected gradient ascent warm
// started at d. Ascent steps only ever improve the objective, so the result
// is never below V(g, d). Throws std::runtime_error (carrying the residual)
// when the iteration budget runs out first.
ProxResult prox_value(const Game& game, const LinearGenerator& g, const Discriminator& d,
                      const SobolevMetric& m, const ProximalConfig& cfg);

// Danskin gradient: solves the inner problem, then differentiates the game
// value at the maximizer. Requires a positive certificate margin unless
// waive_certificate is set (the waiver is logged); the variational class has
// no certificate, so it always needs the waiver.
GeneratorGradient prox_grad_generator(const Game& game, const LinearGenerator& g,
                                      const Discriminator& d, const SobolevMetric& m,
                                      const ProximalConfig& cfg,
                                      bool waive_certificate = false);

// Exact eta1 for the quadratic and piecewise-linear classes (smallest
// eigenvalue of the penalty's parameter quadratic form, times two). eta2 is
// the largest spectral norm of the value's parameter Hessian over a probe
// set between d_class and the best response; for objectives quadratic in the
// parameters that probe is exact. A degenerate metric yields margin -inf and
// an explanation in note.
StrongConcavityCertificate strong_concavity_certificate(const Game& game,
                                                        const LinearGenerator& g,
                                                        const Discriminator& d_class,
                                                        const SobolevMetric& m,
                                                        double lambda);

}  // namespace proxeq

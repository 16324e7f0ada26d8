#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "proxeq/discriminator.hpp"
#include "proxeq/games.hpp"
#include "proxeq/sobolev.hpp"

namespace proxeq {

// One checked condition. `measured` is the quantity the condition examined,
// `margin` its signed slack against the condition's bound (nonnegative
// exactly when the condition passes), `tolerance` the slack the bound was
// relaxed by. A grid point that cannot be evaluated records a passing
// condition whose note says why it was skipped.
struct ConditionResult {
  std::string name;
  double measured = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

// Outcome of one certification run. `points` lists the tested points in grid
// order. The verdict is "pass" only when every condition holds with
// nonnegative margin, "uninformative" when the check could not bind (see
// verify_thm3_inequality), "fail" otherwise. Grid-based runs certify the
// claim on the recorded grid only; `note` states that scope.
struct EquilibriumReport {
  std::string claim;
  std::vector<std::string> points;
  std::vector<ConditionResult> conditions;
  std::string verdict;
  std::string note;

  bool passed() const { return verdict == "pass"; }
};

// Local-Nash test at (g, d). First order: each player's projected-gradient
// residual is at most tol. Second order: the finite-difference Hessian of
// the value, restricted to the parameter directions that stay feasible both
// ways, needs eigmin >= -10 tol on the generator side and eigmax <= 10 tol
// on the discriminator side; a one-sided feasible direction whose slope
// vanishes is probed by a one-sided second difference instead.
EquilibriumReport check_local_nash(const Game& game, const LinearGenerator& g,
                                   const Discriminator& d, double tol = 1e-6);

// Certifies that no grid point paired with its best-response discriminator
// is a local Nash point of the quadratic-cost transport game with data
// scale sigma > 1: holding that discriminator fixed, the value's Hessian in
// the mean parameter must have an eigenvalue at most -(sigma - 1) + tol,
// so the generator always has a second-order escape. Rank-deficient or
// cap-violating grid entries are skipped with a note.
EquilibriumReport certify_no_nash_w2(double sigma,
                                     const std::vector<LinearGenerator>& grid,
                                     double tol = 1e-6);

// Same certification for the variational divergence game. Requires the
// family to be flagged scaled_curvature_nondecreasing (throws otherwise):
// that property makes x -> f*(D*(x)) convex, and the check verifies strict
// convexity numerically, with Hessian eigmin >= tol at every probe point of
// an axis lattice of radius sigma around the origin.
EquilibriumReport certify_no_nash_fgan(const FDivergenceSpec& family, double sigma,
                                       const std::vector<LinearGenerator>& grid,
                                       double tol = 1e-6);

// Same certification for the 1-D Lipschitz game: the best response at each
// grid point must be convex (slope sequence nondecreasing within tol) and
// non-constant (slope range above tol), which makes the value strictly
// concave in the mean. Solver failures from degenerate points propagate.
EquilibriumReport certify_no_nash_wgan1d(double sigma,
                                         const std::vector<LinearGenerator>& grid,
                                         double tol = 1e-6);

// Grid check of the two-sided characterization of a lambda-proximal
// equilibrium at (g_star, d_star): every disc_grid entry d must satisfy
// V(g_star, d) <= V(g_star, d_star) + tol, and every gen_grid entry g must
// satisfy V(g_star, d_star) <= prox value of g anchored at d_star + tol.
// lambda = 0 degenerates the right side to the exact best-response value.
EquilibriumReport check_proximal_equilibrium(
    const Game& game, const LinearGenerator& g_star, const Discriminator& d_star,
    double lambda, const SobolevMetric& m,
    const std::vector<LinearGenerator>& gen_grid,
    const std::vector<Discriminator>& disc_grid, double tol = 1e-6);

// Containment check for the equilibrium hierarchy with lambda1 <= lambda2:
// every candidate that passes check_proximal_equilibrium at lambda2 must
// also pass it at lambda1. Candidates failing at lambda2 impose nothing and
// are recorded as vacuous. A counterexample would indicate a bug in the
// proximal machinery, so it fails the report.
EquilibriumReport pe_hierarchy_check(
    const Game& game, double lambda1, double lambda2,
    const std::vector<std::pair<LinearGenerator, Discriminator>>& candidates,
    const SobolevMetric& m, const std::vector<LinearGenerator>& gen_grid,
    const std::vector<Discriminator>& disc_grid, double tol = 1e-6);

// Closed-form check, on the quadratic-cost transport game with data scale
// sigma > 1 and cost scale eta, that the value gap between any grid
// generator and the capped minimizer (W = I, u = 0) dominates the scaled
// Sobolev distance between their best responses:
//   V(theta*) <= V(theta) - (1/2 eta) ||D_theta - D_theta*||^2.
// Grid entries must have symmetric PSD W so the best-response family is
// convex; both sides are evaluated in closed form.
EquilibriumReport verify_thm2_inequality(double sigma, double eta,
                                         const std::vector<LinearGenerator>& theta_grid,
                                         double tol = 1e-9);

// Deterministic data-sample lattice used by verify_thm3_inequality's
// transport-magnitude bound: quantiles of N(0, sigma^2) at the midpoint
// levels (i + 1/2)/n.
std::vector<double> thm3_transport_samples(double sigma, std::size_t n = 64);

// Sample-based check, on the 1-D Lipschitz game with data scale sigma < 1
// and grid generators with w >= 1, that the value gap to the constrained
// minimizer (w = 1, u = 0) dominates the Sobolev distance between best
// responses scaled by the empirical transport bound
//   eta = 2 min over grid points and samples of |x - T(x)|,
// T being the monotone transport map onto the generator law. If some
// sample's transport magnitude falls below 1e-8 the bound is vacuous and
// the verdict is "uninformative".
EquilibriumReport verify_thm3_inequality(double sigma,
                                         const std::vector<LinearGenerator>& theta_grid,
                                         double tol = 1e-9);

}  // namespace proxeq

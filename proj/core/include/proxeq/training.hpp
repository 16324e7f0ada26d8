#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "proxeq/games.hpp"
#include "proxeq/proximal.hpp"
#include "proxeq/sobolev.hpp"

namespace proxeq {

enum class TrainAlgorithm { kGda, kAlternating, kProximal };

struct TrainConfig {
  TrainAlgorithm algorithm = TrainAlgorithm::kGda;
  // Generator descent step; the schedule overrides the constant when set.
  double gen_step = 1e-2;
  std::function<double(int)> gen_step_schedule;
  // Halve the generator step until the value decreases (at the discriminator
  // the step is taken against), instead of trusting the constant.
  bool gen_backtracking = false;
  double disc_step = 1e-2;
  // Ascent steps per descent step in alternating mode.
  int n_disc_per_gen = 5;
  // Inner-solve settings for proximal mode.
  ProximalConfig prox;
  // Sample count for the proximal penalty's gradient semi-norm; the samples
  // are drawn from the data law with the run seed.
  std::size_t prox_metric_samples = 256;
  int max_iters = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

// One iterate. Record 0 is the (projected) initial pair; record k the pair
// after k iterations. Gradient norms are measured at this record's own pair:
// gen_grad_norm is the norm of the update direction the algorithm would step
// with from here (for proximal mode that is the gradient at the inner
// maximizer), disc_grad_norm the norm of dV/d(discriminator params). The
// projection flags say whether the step that produced this record was
// clipped onto a feasible set.
struct TrainRecord {
  int iteration;
  LinearGenerator g;
  Discriminator d;
  double value;
  std::optional<double> prox_value;
  double gen_grad_norm;
  double disc_grad_norm;
  bool gen_projected;
  bool disc_projected;
  bool flagged;  // non-finite or magnitude above the divergence guard
};

struct Trajectory {
  std::vector<TrainRecord> records;
  bool diverged = false;
  std::string note;  // reason when the run terminated early

  const TrainRecord& back() const { return records.back(); }
};

// Runs the configured loop from the given pair, projecting onto the feasible
// sets after every step. Simultaneous mode steps both players from the same
// iterate; alternating mode takes n_disc_per_gen ascent steps then one
// descent step; proximal mode replaces the ascent with the penalized inner
// maximization and descends the gradient at its solution. Deterministic for
// a fixed config. A value beyond 1e12 in magnitude, a non-finite value, or a
// value computation that throws ends the run with a flagged final record.
Trajectory train(const Game& game, const TrainConfig& cfg, const LinearGenerator& init_g,
                 const Discriminator& init_d);

// Plain-objective probe: freeze the discriminator and descend V(g, d_frozen)
// in the generator for the given number of steps.
Trajectory freeze_disc_probe(const Game& game, const LinearGenerator& g,
                             const Discriminator& d_frozen, int steps, double gen_step);

// Penalized-objective probe: descend the proximal value anchored at d_frozen.
// Records carry both V(g, d_frozen) and the proximal value.
Trajectory freeze_disc_proximal_probe(const Game& game, const LinearGenerator& g,
                                      const Discriminator& d_frozen, const SobolevMetric& m,
                                      const ProximalConfig& prox, int steps, double gen_step);

}  // namespace proxeq

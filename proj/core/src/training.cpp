#include "proxeq/training.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "discriminator_params.hpp"
#include "proxeq/rng.hpp"

namespace proxeq {

namespace {

using detail::ParamSpace;

constexpr double kDivergenceGuard = 1e12;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double direction_norm(const GeneratorGradient& g) {
  return std::hypot(frobenius_norm(g.w), norm2(g.u));
}

bool clipped(const Vector& raw, const Vector& projected) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    scale = std::max(scale, std::abs(raw[i]));
    diff = std::max(diff, std::abs(raw[i] - projected[i]));
  }
  return diff > 1e-12 * (1.0 + scale);
}

// One projected ascent step on the discriminator parameters.
Discriminator ascend_disc(const Game& game, const LinearGenerator& g, const Discriminator& d,
                          double step, bool* projected) {
  const ParamSpace space{game, d};
  const Vector raw = space.pack(d) + step * space.value_grad(g, d);
  const Vector proj = space.project(raw);
  *projected = clipped(raw, proj);
  return space.unpack(proj);
}

// One projected descent step on the generator. Backtracking, when on, halves
// the step until the value against d_used decreases.
LinearGenerator descend_gen(const Game& game, const LinearGenerator& g,
                            const Discriminator& d_used, const GeneratorGradient& dir,
                            double step, bool backtracking, bool* projected) {
  const double base = backtracking ? value(game, g, d_used) : 0.0;
  for (int attempt = 0;; ++attempt) {
    LinearGenerator next = g;
    next.w = next.w - step * dir.w;
    next.u = next.u - step * dir.u;
    const Matrix raw_w = next.w;
    next.project();
    *projected = frobenius_norm(raw_w - next.w) > 1e-12 * (1.0 + frobenius_norm(raw_w));
    if (!backtracking || attempt >= 30) return next;
    bool improved = false;
    try {
      improved = value(game, next, d_used) <= base;
    } catch (const std::exception&) {
      improved = false;  // stepped out of the value's domain, shrink
    }
    if (improved) return next;
    step *= 0.5;
  }
}

double step_at(const TrainConfig& cfg, int k) {
  return cfg.gen_step_schedule ? cfg.gen_step_schedule(k) : cfg.gen_step;
}

}  // namespace

void TrainConfig::validate() const {
  if (gen_step <= 0.0 || disc_step <= 0.0)
    throw std::invalid_argument("training steps must be positive");
  if (n_disc_per_gen < 1)
    throw std::invalid_argument("alternating mode needs at least one ascent step");
  if (max_iters < 0) throw std::invalid_argument("iteration budget must be non-negative");
  if (algorithm == TrainAlgorithm::kProximal) {
    prox.validate();
    if (prox_metric_samples == 0)
      throw std::invalid_argument("the proximal metric needs at least one sample");
  }
}

Trajectory train(const Game& game, const TrainConfig& cfg, const LinearGenerator& init_g,
                 const Discriminator& init_d) {
  cfg.validate();
  game.validate();

  std::optional<SobolevMetric> metric;
  if (cfg.algorithm == TrainAlgorithm::kProximal) {
    Rng rng(cfg.seed);
    metric.emplace(sample_set_from_gaussian(game.data, cfg.prox_metric_samples, rng));
  }

  LinearGenerator g = init_g;
  g.project();
  Discriminator d = init_d;
  {
    const ParamSpace space{game, d};
    d = space.unpack(space.project(space.pack(d)));
  }

  Trajectory out;
  out.records.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  bool gen_projected = false, disc_projected = false;

  for (int k = 0;; ++k) {
    double v = kNan;
    std::optional<double> vprox;
    double gen_norm = 0.0, disc_norm = 0.0;
    // The next iterate, prepared while the directions are at hand.
    std::optional<Discriminator> d_next;
    std::optional<GeneratorGradient> gen_dir;
    bool next_disc_projected = false;

    try {
      v = value(game, g, d);
      if (!std::isfinite(v) || std::abs(v) > kDivergenceGuard)
        throw std::runtime_error("value diverged");

      const ParamSpace space{game, d};
      disc_norm = norm2(space.value_grad(g, d));

      switch (cfg.algorithm) {
        case TrainAlgorithm::kGda: {
          gen_dir = grad_generator(game, g, d);
          d_next = ascend_disc(game, g, d, cfg.disc_step, &next_disc_projected);
          break;
        }
        case TrainAlgorithm::kAlternating: {
          Discriminator cur = d;
          for (int s = 0; s < cfg.n_disc_per_gen; ++s) {
            bool moved = false;
            cur = ascend_disc(game, g, cur, cfg.disc_step, &moved);
            next_disc_projected = next_disc_projected || moved;
          }
          gen_dir = grad_generator(game, g, cur);
          d_next = std::move(cur);
          break;
        }
        case TrainAlgorithm::kProximal: {
          const ProxResult r = prox_value(game, g, d, *metric, cfg.prox);
          vprox = r.value;
          gen_dir = grad_generator(game, g, r.d_tilde);
          d_next = r.d_tilde;
          break;
        }
      }
      gen_norm = direction_norm(*gen_dir);
    } catch (const std::exception& e) {
      out.records.push_back({k, g, d, v, vprox, 0.0, 0.0, gen_projected, disc_projected, true});
      out.diverged = true;
      out.note = e.what();
      return out;
    }

    out.records.push_back(
        {k, g, d, v, vprox, gen_norm, disc_norm, gen_projected, disc_projected, false});
    if (k == cfg.max_iters) break;

    d = std::move(*d_next);
    disc_projected = next_disc_projected;
    g = descend_gen(game, g, d, *gen_dir, step_at(cfg, k), cfg.gen_backtracking,
                    &gen_projected);
  }
  return out;
}

Trajectory freeze_disc_probe(const Game& game, const LinearGenerator& g0,
                             const Discriminator& d_frozen, int steps, double gen_step) {
  if (steps < 0) throw std::invalid_argument("probe step budget must be non-negative");
  if (gen_step <= 0.0) throw std::invalid_argument("probe step must be positive");

  LinearGenerator g = g0;
  g.project();
  Trajectory out;
  bool gen_projected = false;

  for (int k = 0;; ++k) {
    double v = kNan;
    std::optional<GeneratorGradient> dir;
    double gen_norm = 0.0, disc_norm = 0.0;
    try {
      v = value(game, g, d_frozen);
      if (!std::isfinite(v) || std::abs(v) > kDivergenceGuard)
        throw std::runtime_error("value diverged");
      const ParamSpace space{game, d_frozen};
      disc_norm = norm2(space.value_grad(g, d_frozen));
      dir = grad_generator(game, g, d_frozen);
      gen_norm = direction_norm(*dir);
    } catch (const std::exception& e) {
      out.records.push_back({k, g, d_frozen, v, {}, 0.0, 0.0, gen_projected, false, true});
      out.diverged = true;
      out.note = e.what();
      return out;
    }
    out.records.push_back({k, g, d_frozen, v, {}, gen_norm, disc_norm, gen_projected, false, false});
    if (k == steps) break;
    g = descend_gen(game, g, d_frozen, *dir, gen_step, false, &gen_projected);
  }
  return out;
}

Trajectory freeze_disc_proximal_probe(const Game& game, const LinearGenerator& g0,
                                      const Discriminator& d_frozen, const SobolevMetric& m,
                                      const ProximalConfig& prox, int steps, double gen_step) {
  if (steps < 0) throw std::invalid_argument("probe step budget must be non-negative");
  if (gen_step <= 0.0) throw std::invalid_argument("probe step must be positive");
  prox.validate();

  LinearGenerator g = g0;
  g.project();
  Trajectory out;
  bool gen_projected = false;

  for (int k = 0;; ++k) {
    double v = kNan;
    std::optional<double> vprox;
    std::optional<GeneratorGradient> dir;
    double gen_norm = 0.0, disc_norm = 0.0;
    try {
      v = value(game, g, d_frozen);
      if (!std::isfinite(v) || std::abs(v) > kDivergenceGuard)
        throw std::runtime_error("value diverged");
      const ParamSpace space{game, d_frozen};
      disc_norm = norm2(space.value_grad(g, d_frozen));
      const ProxResult r = prox_value(game, g, d_frozen, m, prox);
      vprox = r.value;
      dir = grad_generator(game, g, r.d_tilde);
      gen_norm = direction_norm(*dir);
    } catch (const std::exception& e) {
      out.records.push_back({k, g, d_frozen, v, vprox, 0.0, 0.0, gen_projected, false, true});
      out.diverged = true;
      out.note = e.what();
      return out;
    }
    out.records.push_back(
        {k, g, d_frozen, v, vprox, gen_norm, disc_norm, gen_projected, false, false});
    if (k == steps) break;
    g = descend_gen(game, g, d_frozen, *dir, gen_step, false, &gen_projected);
  }
  return out;
}

}  // namespace proxeq

#include "proxeq/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "discriminator_params.hpp"
#include "proxeq/log.hpp"

namespace proxeq {

namespace {

using detail::ParamSpace;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Penalty (1/n) sum_i ||grad d~(x_i) - grad d(x_i)||^2 against gradients of
// the warm start cached once.
struct Penalty {
  const SobolevMetric& metric;
  std::vector<Vector> base;

  Penalty(const SobolevMetric& m, const Discriminator& d) : metric(m) {
    base.reserve(m.samples.size());
    for (const Vector& x : m.samples.points) base.push_back(eval_and_grad(d, x).grad);
  }

  double operator()(const Discriminator& d) const {
    const std::size_t n = metric.samples.size();
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector diff = eval_and_grad(d, metric.samples.points[i]).grad - base[i];
      terms[i] = dot(diff, diff);
    }
    return pairwise_sum(terms) / static_cast<double>(n);
  }

  Vector grad(const ParamSpace& space, const Vector& theta, const Discriminator& d) const {
    const std::size_t n = metric.samples.size();
    Vector out(space.size());
    if (const auto* q = std::get_if<QuadraticDiscriminator>(&d)) {
      const std::size_t dim = q->dim();
      Matrix da(dim, dim);
      Vector db(dim);
      for (std::size_t i = 0; i < n; ++i) {
        const Vector& x = metric.samples.points[i];
        const Vector r = q->grad(x) - base[i];
        da = da + outer(r, x);
        db = db + r;
      }
      da = (4.0 / static_cast<double>(n)) * symmetrize(da);
      db = (2.0 / static_cast<double>(n)) * db;
      std::size_t at = 0;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out[at++] = da(i, j);
      for (std::size_t i = 0; i < dim; ++i) out[at++] = db[i];
      return out;
    }
    if (const auto* p = std::get_if<PiecewiseLinearDiscriminator>(&d)) {
      // Derivative is constant per segment, so the penalty splits into
      // per-segment sums of slope residuals.
      for (std::size_t i = 0; i < n; ++i) {
        const double x = metric.samples.points[i][0];
        const double r = p->deriv(x) - base[i][0];
        std::size_t idx;
        if (x < p->knots.front()) {
          idx = 0;
        } else if (x >= p->knots.back()) {
          idx = out.size() - 1;
        } else {
          idx = 1;
          while (x >= p->knots[idx]) ++idx;  // knots strictly increasing
        }
        out[idx] += 2.0 * r / static_cast<double>(n);
      }
      return out;
    }
    // The variational family's x-gradient chains through f'' of the density
    // ratio; rather than require a third derivative from the divergence
    // table, differentiate the scalar penalty centrally. Off-diagonal matrix
    // coordinates move in symmetric pairs to stay inside the class.
    const auto& l = std::get<LogRatioDiscriminator>(d);
    const std::size_t dim = l.dim();
    const double h = 1e-5;
    auto pen_at = [&](const Vector& t) { return (*this)(space.unpack(t)); };
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        Vector tp = theta, tm = theta;
        tp[i * dim + j] += h;
        tm[i * dim + j] -= h;
        if (i != j) {
          tp[j * dim + i] += h;
          tm[j * dim + i] -= h;
        }
        const double fd = (pen_at(tp) - pen_at(tm)) / (2.0 * h);
        out[i * dim + j] = i == j ? fd : 0.5 * fd;
        out[j * dim + i] = out[i * dim + j];
      }
    }
    // Every slot matters here, r included: the x-gradient's amplitude factor
    // f''(e^s) e^s carries the constant through s.
    for (std::size_t i = dim * dim; i < out.size(); ++i) {
      Vector tp = theta, tm = theta;
      tp[i] += h;
      tm[i] -= h;
      out[i] = (pen_at(tp) - pen_at(tm)) / (2.0 * h);
    }
    return out;
  }
};

struct InnerSolve {
  double objective = 0.0;
  Vector theta;
  int iterations = 0;
  double residual = 0.0;
};

InnerSolve solve_inner(const Game& game, const LinearGenerator& g, const Discriminator& d,
                       const SobolevMetric& m, const ProximalConfig& cfg) {
  cfg.validate();
  const ParamSpace space{game, d};
  const Penalty penalty(m, d);

  auto objective_at = [&](const Discriminator& dt) {
    return value(game, g, dt) - 0.5 * cfg.lambda * penalty(dt);
  };
  // Far iterates of the variational class can push the value quadrature out
  // of range; the overflow throw marks the step as unusable rather than
  // fatal.
  auto safe_objective = [&](const Vector& theta) {
    try {
      return objective_at(space.unpack(theta));
    } catch (const std::exception&) {
      return -kInf;
    }
  };

  Vector theta = space.pack(d);
  Discriminator current = space.unpack(theta);
  double obj = objective_at(current);  // warm-start failures propagate

  Vector best_theta = theta;
  double best_obj = obj;

  double step = cfg.inner_step.value_or(1.0 / (1.0 + 0.5 * cfg.lambda));
  const bool fixed_step = cfg.inner_step.has_value();

  // Barzilai-Borwein state: the secant pair re-estimates local curvature each
  // iteration, which plain multiplicative step control cannot do fast enough
  // once lambda makes the inner problem stiff.
  Vector prev_theta, prev_grad;
  bool have_prev = false;

  int iter = 0;
  double residual = kInf;
  for (; iter < cfg.inner_max_iters; ++iter) {
    const Vector grad =
        space.value_grad(g, current) - 0.5 * cfg.lambda * penalty.grad(space, theta, current);
    residual = norm2(space.project(theta + grad) - theta);
    if (residual <= cfg.inner_tol) {
      return {best_obj, best_theta, iter, residual};
    }
    if (fixed_step) {
      theta = space.project(theta + step * grad);
      current = space.unpack(theta);
      obj = safe_objective(theta);
      if (obj > best_obj) {
        best_obj = obj;
        best_theta = theta;
      }
      continue;
    }
    if (have_prev) {
      const Vector s = theta - prev_theta;
      const Vector y = grad - prev_grad;
      const double yy = dot(y, y);
      const double bb = yy > 0.0 ? -dot(s, y) / yy : 0.0;
      if (std::isfinite(bb) && bb > 1e-12) {
        step = std::min(bb, 1e6);
      } else {
        // No usable curvature along the secant: the leftover residual lives in
        // directions where the objective is locally affine (a slope coordinate
        // with a constant gradient walking to its bound). A constant step would
        // crawl there, so grow it geometrically and let the sufficient-increase
        // test cut back any overshoot.
        step = std::min(step * 4.0, 1e6);
      }
    }
    prev_theta = theta;
    prev_grad = grad;
    have_prev = true;

    // Near the optimum the true per-step gain falls below the rounding noise
    // of the objective while the analytic gradient is still accurate, so the
    // sufficient-increase test gets a noise allowance. Best-so-far tracking
    // keeps the returned value from drifting.
    const double noise = 1e-12 * (1.0 + std::abs(obj));
    bool moved = false;
    for (int shrink = 0; shrink < 60; ++shrink) {
      const Vector cand = space.project(theta + step * grad);
      const double cand_obj = safe_objective(cand);
      if (cand_obj >= obj + 1e-4 * dot(grad, cand - theta) - noise) {
        theta = cand;
        current = space.unpack(theta);
        obj = cand_obj;
        if (obj > best_obj) {
          best_obj = obj;
          best_theta = theta;
        }
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // step underflow: report the residual we are stuck at
  }
  std::ostringstream msg;
  msg << "prox inner maximization did not reach tol " << cfg.inner_tol << " within "
      << cfg.inner_max_iters << " iterations, residual = " << residual;
  throw std::runtime_error(msg.str());
}

// Orthonormal basis of symmetric matrix directions: E_ii, (E_ij + E_ji)/sqrt2.
std::vector<std::pair<std::size_t, std::size_t>> sym_basis(std::size_t d) {
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) idx.emplace_back(i, j);
  return idx;
}

double quadratic_eta1(const SobolevMetric& m, std::size_t d) {
  const auto basis = sym_basis(d);
  const std::size_t nb = basis.size() + d;
  const std::size_t n = m.samples.size();
  const double root_half = std::sqrt(0.5);

  // Per-sample gradient of D along each parameter basis direction.
  auto basis_grad = [&](std::size_t alpha, const Vector& x) {
    Vector g(d);
    if (alpha < basis.size()) {
      const auto [i, j] = basis[alpha];
      if (i == j) {
        g[i] = 2.0 * x[i];
      } else {
        g[i] = 2.0 * root_half * x[j];
        g[j] = 2.0 * root_half * x[i];
      }
    } else {
      g[alpha - basis.size()] = 1.0;
    }
    return g;
  };

  Matrix b(nb, nb);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<Vector> gs;
    gs.reserve(nb);
    for (std::size_t alpha = 0; alpha < nb; ++alpha)
      gs.push_back(basis_grad(alpha, m.samples.points[s]));
    for (std::size_t alpha = 0; alpha < nb; ++alpha)
      for (std::size_t beta = alpha; beta < nb; ++beta)
        b(alpha, beta) += dot(gs[alpha], gs[beta]) / static_cast<double>(n);
  }
  for (std::size_t alpha = 0; alpha < nb; ++alpha)
    for (std::size_t beta = 0; beta < alpha; ++beta) b(alpha, beta) = b(beta, alpha);

  const SymEig eig = sym_eig(b);
  double lo = eig.values[0];
  for (std::size_t i = 0; i < nb; ++i) lo = std::min(lo, eig.values[i]);
  return 2.0 * std::max(lo, 0.0);
}

// Largest |eigenvalue| of the value's parameter Hessian at one quadratic
// probe, by central differences of the analytic parameter gradient along the
// symmetric basis.
double probe_hessian_norm(const Game& game, const LinearGenerator& g,
                          const QuadraticDiscriminator& probe) {
  const std::size_t d = probe.dim();
  const auto basis = sym_basis(d);
  const std::size_t nb = basis.size() + d;
  const double h = 1e-4;
  const double root_half = std::sqrt(0.5);

  auto shifted = [&](std::size_t alpha, double t) {
    Matrix a = probe.a;
    Vector bb = probe.b;
    if (alpha < basis.size()) {
      const auto [i, j] = basis[alpha];
      if (i == j) {
        a(i, i) += t;
      } else {
        a(i, j) += t * root_half;
        a(j, i) += t * root_half;
      }
    } else {
      bb[alpha - basis.size()] += t;
    }
    return QuadraticDiscriminator(std::move(a), std::move(bb), probe.c);
  };
  auto grad_coords = [&](const QuadraticDiscriminator& at) {
    const DiscriminatorGradient dg = grad_discriminator(game, g, at);
    Vector c(nb);
    for (std::size_t alpha = 0; alpha < basis.size(); ++alpha) {
      const auto [i, j] = basis[alpha];
      c[alpha] = i == j ? dg.a(i, i) : 2.0 * root_half * dg.a(i, j);
    }
    for (std::size_t k = 0; k < d; ++k) c[basis.size() + k] = dg.b[k];
    return c;
  };

  Matrix hess(nb, nb);
  for (std::size_t alpha = 0; alpha < nb; ++alpha) {
    const Vector hi = grad_coords(shifted(alpha, h));
    const Vector lo = grad_coords(shifted(alpha, -h));
    for (std::size_t beta = 0; beta < nb; ++beta)
      hess(alpha, beta) = (hi[beta] - lo[beta]) / (2.0 * h);
  }
  hess = symmetrize(hess);
  const SymEig eig = sym_eig(hess);
  double norm = 0.0;
  for (std::size_t i = 0; i < nb; ++i) norm = std::max(norm, std::abs(eig.values[i]));
  return norm;
}

// Pulls a quadratic probe strictly inside the c-concave set so finite
// differences around it stay feasible.
QuadraticDiscriminator interior_probe(const QuadraticDiscriminator& d, double eta) {
  const double cap = 0.5 * eta - 1e-3;
  const SymEig eig = sym_eig(d.a);
  Vector lam(d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) lam[i] = std::min(eig.values[i], cap);
  Matrix a = symmetrize(
      matmul(matmul(eig.vectors, Matrix::diag(lam)), transpose(eig.vectors)));
  return QuadraticDiscriminator(std::move(a), d.b, d.c);
}

}  // namespace

void ProximalConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("ProximalConfig: lambda must be positive");
  if (!(inner_tol > 0.0))
    throw std::invalid_argument("ProximalConfig: inner_tol must be positive");
  if (inner_max_iters <= 0)
    throw std::invalid_argument("ProximalConfig: inner_max_iters must be positive");
  if (inner_step && !(*inner_step > 0.0))
    throw std::invalid_argument("ProximalConfig: inner_step must be positive when set");
}

ProxResult prox_value(const Game& game, const LinearGenerator& g, const Discriminator& d,
                      const SobolevMetric& m, const ProximalConfig& cfg) {
  const InnerSolve s = solve_inner(game, g, d, m, cfg);
  const ParamSpace space{game, d};
  return {s.objective, space.unpack(s.theta), s.iterations, s.residual};
}

GeneratorGradient prox_grad_generator(const Game& game, const LinearGenerator& g,
                                      const Discriminator& d, const SobolevMetric& m,
                                      const ProximalConfig& cfg, bool waive_certificate) {
  if (std::holds_alternative<LogRatioDiscriminator>(d)) {
    if (!waive_certificate)
      throw std::invalid_argument(
          "prox_grad_generator: the variational class carries no strong-concavity "
          "certificate; pass waive_certificate to proceed");
    PROXEQ_INFO("prox_grad_generator: certificate waived for the variational class");
  } else {
    const StrongConcavityCertificate cert =
        strong_concavity_certificate(game, g, d, m, cfg.lambda);
    if (!cert.valid()) {
      if (!waive_certificate)
        throw std::runtime_error("prox_grad_generator: certificate margin " +
                                 std::to_string(cert.margin) + " is not positive (" +
                                 cert.note + "); pass waive_certificate to proceed");
      PROXEQ_INFO("prox_grad_generator: certificate waived, margin = " << cert.margin);
    }
  }
  const ProxResult r = prox_value(game, g, d, m, cfg);
  return grad_generator(game, g, r.d_tilde);
}

StrongConcavityCertificate strong_concavity_certificate(const Game& game,
                                                        const LinearGenerator& g,
                                                        const Discriminator& d_class,
                                                        const SobolevMetric& m,
                                                        double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("strong_concavity_certificate: lambda must be positive");
  StrongConcavityCertificate cert;

  if (const auto* q = std::get_if<QuadraticDiscriminator>(&d_class)) {
    if (game.kind != GameKind::kW2Lq)
      throw std::invalid_argument(
          "strong_concavity_certificate: quadratic class belongs to the transport game");
    cert.eta1 = quadratic_eta1(m, q->dim());
    if (cert.eta1 <= 1e-14) {
      cert.margin = -kInf;
      cert.note =
          "metric degenerate: some parameter direction produces no gradient change "
          "at any sample, so the penalty is not strongly convex";
      return cert;
    }
    const QuadraticDiscriminator br =
        std::get<QuadraticDiscriminator>(best_response_disc(game, g));
    Matrix mid_a = 0.5 * (q->a + br.a);
    const QuadraticDiscriminator probes[] = {
        interior_probe(QuadraticDiscriminator(Matrix(q->dim(), q->dim()), Vector(q->dim())),
                       game.eta),
        interior_probe(*q, game.eta), interior_probe(br, game.eta),
        interior_probe(QuadraticDiscriminator(std::move(mid_a), 0.5 * (q->b + br.b)),
                       game.eta)};
    for (const auto& probe : probes)
      cert.eta2 = std::max(cert.eta2, probe_hessian_norm(game, g, probe));
    cert.margin = 0.5 * lambda * cert.eta1 - cert.eta2;
    cert.note = "eta2 probed at the warm start, zero, the best response, and their midpoint";
    return cert;
  }

  if (const auto* p = std::get_if<PiecewiseLinearDiscriminator>(&d_class)) {
    if (game.kind != GameKind::kWgan1d)
      throw std::invalid_argument(
          "strong_concavity_certificate: piecewise-linear class belongs to the 1-D game");
    // One slope parameter per region; the penalty form is diagonal with the
    // sample count of each region, and the value is affine in the slopes.
    std::vector<std::size_t> counts(p->knots.size() + 1, 0);
    for (const Vector& xv : m.samples.points) {
      const double x = xv[0];
      std::size_t idx;
      if (x < p->knots.front()) {
        idx = 0;
      } else if (x >= p->knots.back()) {
        idx = counts.size() - 1;
      } else {
        idx = 1;
        while (x >= p->knots[idx]) ++idx;
      }
      ++counts[idx];
    }
    std::size_t lo = counts[0];
    for (std::size_t c : counts) lo = std::min(lo, c);
    cert.eta1 = 2.0 * static_cast<double>(lo) / static_cast<double>(m.samples.size());
    cert.eta2 = 0.0;
    if (lo == 0) {
      cert.margin = -kInf;
      cert.note = "metric degenerate: a slope region contains no samples";
      return cert;
    }
    cert.margin = 0.5 * lambda * cert.eta1;
    cert.note = "value affine in the slopes (eta2 = 0); any positive lambda certifies";
    return cert;
  }

  throw std::invalid_argument(
      "strong_concavity_certificate: no parameter certificate for the variational class");
}

}  // namespace proxeq

#include "doctest.h"
#include "proxeq/games.hpp"
#include "proxeq/oracles.hpp"
#include "proxeq/rng.hpp"

#include <cmath>
#include <stdexcept>

using namespace proxeq;

namespace {

const SpectralConstraint kLooseCap{SpectralBound::kMaxSingularValueAtMost, 10.0};

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = scale * rng.normal();
  return m;
}

// Random W with singular values pushed into [lo, hi].
Matrix random_conditioned(Rng& rng, std::size_t r, std::size_t c, double lo, double hi) {
  Matrix w = random_matrix(rng, r, c, 1.0);
  w = project_spectral(w, {SpectralBound::kMinSingularValueAtLeast, lo});
  return project_spectral(w, {SpectralBound::kMaxSingularValueAtMost, hi});
}

LinearGenerator random_generator(Rng& rng, std::size_t d, std::size_t k) {
  return LinearGenerator(random_conditioned(rng, d, k, 0.4, 2.0),
                         0.5 * rng.normal_vector(d), kLooseCap);
}

// For variational-family games the generator law must keep its variance above
// half the data variance, or the chi-squared objective is infinite and no
// best response exists.
LinearGenerator random_fgan_generator(Rng& rng, std::size_t d, std::size_t k, double sigma) {
  return LinearGenerator(random_conditioned(rng, d, k, 0.8 * sigma, 1.6 * sigma),
                         0.3 * rng.normal_vector(d), kLooseCap);
}

// Caps the curvature at 0.5 eta - slack. The finite-difference tests pass a
// wide slack because near the strict-concavity boundary the value's higher
// derivatives blow up and central differences lose digits.
QuadraticDiscriminator random_w2_disc(Rng& rng, std::size_t dim, double eta,
                                      double slack = 1e-3) {
  Matrix noise = symmetrize(random_matrix(rng, dim, dim, 1.0));
  const SymEig eig = sym_eig(noise);
  Vector lam(dim);
  for (std::size_t i = 0; i < dim; ++i)
    lam[i] = std::min(eig.values[i], 0.5 * eta - slack);
  Matrix a = symmetrize(
      matmul(matmul(eig.vectors, Matrix::diag(lam)), transpose(eig.vectors)));
  return QuadraticDiscriminator(std::move(a), rng.normal_vector(dim), rng.normal());
}

LogRatioDiscriminator random_fgan_disc(Rng& rng, std::size_t dim, const FDivergenceSpec& f) {
  return LogRatioDiscriminator(symmetrize(random_matrix(rng, dim, dim, 0.25)),
                               0.3 * rng.normal_vector(dim), 0.2 * rng.normal(), f);
}

PiecewiseLinearDiscriminator random_pl_disc(Rng& rng) {
  std::vector<double> knots;
  double k = -2.0 + rng.uniform();
  const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 3.0);
  for (std::size_t i = 0; i < n; ++i) {
    knots.push_back(k);
    k += 0.4 + rng.uniform();
  }
  std::vector<double> values{rng.normal()};
  for (std::size_t i = 0; i + 1 < n; ++i)
    values.push_back(values.back() + rng.uniform(-0.9, 0.9) * (knots[i + 1] - knots[i]));
  return PiecewiseLinearDiscriminator(knots, values, rng.uniform(-0.9, 0.9),
                                      rng.uniform(-0.9, 0.9));
}

double fd_wrt_w(const Game& game, const LinearGenerator& g, const Discriminator& d,
                std::size_t i, std::size_t j, double h) {
  LinearGenerator gp = g, gm = g;
  gp.w(i, j) += h;
  gm.w(i, j) -= h;
  return (value(game, gp, d) - value(game, gm, d)) / (2.0 * h);
}

double fd_wrt_u(const Game& game, const LinearGenerator& g, const Discriminator& d,
                std::size_t i, double h) {
  LinearGenerator gp = g, gm = g;
  gp.u[i] += h;
  gm.u[i] -= h;
  return (value(game, gp, d) - value(game, gm, d)) / (2.0 * h);
}

void check_generator_gradient(const Game& game, const LinearGenerator& g,
                              const Discriminator& d) {
  const GeneratorGradient grad = grad_generator(game, g, d);
  const double h = 1e-5;
  for (std::size_t i = 0; i < g.data_dim(); ++i) {
    for (std::size_t j = 0; j < g.latent_dim(); ++j) {
      const double fd = fd_wrt_w(game, g, d, i, j, h);
      CHECK(grad.w(i, j) == doctest::Approx(fd).epsilon(1e-5).scale(std::max(1.0, std::abs(fd))));
    }
    const double fd = fd_wrt_u(game, g, d, i, h);
    CHECK(grad.u[i] == doctest::Approx(fd).epsilon(1e-5).scale(std::max(1.0, std::abs(fd))));
  }
}

}  // namespace

TEST_SUITE("games") {

TEST_CASE("construction, validation, and generator projection") {
  const Game w2 = Game::w2_lq(2.0, 2, 2, 1.0);
  w2.validate();
  CHECK(w2.sigma() == doctest::Approx(2.0));
  CHECK_THROWS_AS(Game::w2_lq(2.0, 2, 2, 0.0), std::invalid_argument);

  Game bad = w2;
  bad.data = Gaussian(Vector{0.0, 0.0}, Matrix{{4.0, 0.5}, {0.5, 4.0}});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  LinearGenerator g(Matrix{{3.0, 0.0}, {0.0, 0.2}}, Vector(2),
                    {SpectralBound::kMaxSingularValueAtMost, 1.0});
  CHECK(!g.feasible());
  g.project();
  CHECK(g.feasible());
  CHECK(g.w(0, 0) == doctest::Approx(1.0));
  CHECK(g.w(1, 1) == doctest::Approx(0.2));

  CHECK_THROWS_AS(LinearGenerator(Matrix(2, 2), Vector(3), kLooseCap),
                  std::invalid_argument);
}

TEST_CASE("discriminator family is enforced per game") {
  const Game w2 = Game::w2_lq(1.0, 1, 1, 1.0);
  const Game fg = Game::fgan_gauss(1.0, 1, 1, fdiv_jsd());
  const Game wg = Game::wgan_1d(1.0);
  const LinearGenerator g(Matrix{{1.0}}, Vector(1), kLooseCap);

  const Discriminator pl = PiecewiseLinearDiscriminator({0.0}, {0.0}, 1.0, -1.0);
  const Discriminator quad = QuadraticDiscriminator(Matrix(1, 1), Vector{1.0});
  const Discriminator kl_d = LogRatioDiscriminator(Matrix(1, 1), Vector(1), 0.0, fdiv_kl());

  CHECK_THROWS_AS(value(w2, g, pl), std::invalid_argument);
  CHECK_THROWS_AS(value(fg, g, quad), std::invalid_argument);
  CHECK_THROWS_AS(value(fg, g, kl_d), std::invalid_argument);  // family mismatch
  CHECK_THROWS_AS(value(wg, g, quad), std::invalid_argument);

  const Discriminator steep = PiecewiseLinearDiscriminator({0.0}, {0.0}, 2.0, -1.0);
  CHECK_THROWS_WITH_AS(value(wg, g, steep), doctest::Contains("Lipschitz"),
                       std::invalid_argument);
}

TEST_CASE("value matches hand-computed anchors") {
  // Zero discriminator makes both transport expectations vanish.
  const Game w2 = Game::w2_lq(2.0, 2, 2, 1.0);
  Rng rng(50);
  for (int rep = 0; rep < 5; ++rep) {
    const LinearGenerator g = random_generator(rng, 2, 2);
    CHECK(value(w2, g, QuadraticDiscriminator(Matrix(2, 2), Vector(2))) ==
          doctest::Approx(0.0).epsilon(1e-14));
  }

  // Unit-slope vee against a wider data distribution.
  const Game wg = Game::wgan_1d(2.0);
  const LinearGenerator ident(Matrix{{1.0}}, Vector(1), kLooseCap);
  const Discriminator vee = PiecewiseLinearDiscriminator({0.0}, {0.0}, 1.0, -1.0);
  const double root_2_over_pi = 0.7978845608028654;
  CHECK(value(wg, ident, vee) ==
        doctest::Approx(-2.0 * root_2_over_pi + root_2_over_pi).epsilon(1e-12));

  // The constant f'(1) discriminator zeroes the variational objective for
  // every generator, realizable or not.
  for (const auto& family : {fdiv_jsd(), fdiv_kl(), fdiv_pearson_chi2()}) {
    const Game fg = Game::fgan_gauss(1.0, 1, 1, family);
    const Discriminator flat =
        LogRatioDiscriminator(Matrix(1, 1), Vector(1), 0.0, family);
    const LinearGenerator realizable(Matrix{{1.0}}, Vector(1), kLooseCap);
    const LinearGenerator off(Matrix{{0.7}}, Vector{0.4}, kLooseCap);
    CHECK(value(fg, realizable, flat) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(value(fg, off, flat) == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("generator gradients match finite differences") {
  Rng rng(51);

  const Game w2_games[] = {Game::w2_lq(2.0, 1, 1, 1.0), Game::w2_lq(1.5, 2, 2, 0.8),
                           Game::w2_lq(1.0, 2, 3, 1.3), Game::w2_lq(1.0, 3, 2, 1.0)};
  for (int rep = 0; rep < 100; ++rep) {
    const Game& game = w2_games[rep % 4];
    const LinearGenerator g =
        random_generator(rng, game.data.dim(), game.latent.dim());
    check_generator_gradient(game, g,
                             random_w2_disc(rng, game.data.dim(), game.eta, 0.1 * game.eta));
  }

  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t dim = rep < 70 ? 1 : 2;
    const auto& family = rep % 3 == 0   ? fdiv_jsd()
                         : rep % 3 == 1 ? fdiv_kl()
                                        : fdiv_pearson_chi2();
    const Game game = Game::fgan_gauss(1.0 + 0.3 * rng.uniform(), dim, dim, family);
    const LinearGenerator g = random_generator(rng, dim, dim);
    check_generator_gradient(game, g, random_fgan_disc(rng, dim, family));
  }

  const Game wg = Game::wgan_1d(1.4);
  for (int rep = 0; rep < 100; ++rep) {
    const LinearGenerator g = random_generator(rng, 1, 1);
    check_generator_gradient(wg, g, random_pl_disc(rng));
  }

  // Constant discriminators make the value independent of the generator.
  const LinearGenerator g1(Matrix{{0.8}}, Vector{0.3}, kLooseCap);
  const GeneratorGradient z1 = grad_generator(
      Game::w2_lq(1.0, 1, 1, 1.0), g1, QuadraticDiscriminator(Matrix(1, 1), Vector(1), 2.0));
  CHECK(frobenius_norm(z1.w) == doctest::Approx(0.0));
  CHECK(norm2(z1.u) == doctest::Approx(0.0));
  const GeneratorGradient z2 =
      grad_generator(Game::fgan_gauss(1.0, 1, 1, fdiv_jsd()), g1,
                     LogRatioDiscriminator(Matrix(1, 1), Vector(1), 0.3, fdiv_jsd()));
  CHECK(frobenius_norm(z2.w) < 1e-12);
  CHECK(norm2(z2.u) < 1e-12);
  const GeneratorGradient z3 = grad_generator(
      wg, g1, PiecewiseLinearDiscriminator({0.0}, {0.7}, 0.0, 0.0));
  CHECK(frobenius_norm(z3.w) == doctest::Approx(0.0));
  CHECK(norm2(z3.u) == doctest::Approx(0.0));
}

TEST_CASE("discriminator gradients match finite differences") {
  Rng rng(52);
  const double h = 1e-5;

  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t dim = 1 + rep % 3;
    const Game game = Game::w2_lq(1.0 + rng.uniform(), dim, dim, 0.7 + rng.uniform());
    const LinearGenerator g = random_generator(rng, dim, dim);
    const QuadraticDiscriminator q = random_w2_disc(rng, dim, game.eta, 0.1 * game.eta);
    const DiscriminatorGradient grad = grad_discriminator(game, g, q);

    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        Matrix ap = q.a, am = q.a;
        ap(i, j) += h;
        am(i, j) -= h;
        if (i != j) {
          ap(j, i) += h;
          am(j, i) -= h;
        }
        const double fd = (value(game, g, QuadraticDiscriminator(ap, q.b, q.c)) -
                           value(game, g, QuadraticDiscriminator(am, q.b, q.c))) /
                          (2.0 * h);
        const double expected = i == j ? grad.a(i, i) : 2.0 * grad.a(i, j);
        CHECK(expected == doctest::Approx(fd).epsilon(1e-5).scale(std::max(1.0, std::abs(fd))));
      }
      Vector bp = q.b, bm = q.b;
      bp[i] += h;
      bm[i] -= h;
      const double fd = (value(game, g, QuadraticDiscriminator(q.a, bp, q.c)) -
                         value(game, g, QuadraticDiscriminator(q.a, bm, q.c))) /
                        (2.0 * h);
      CHECK(grad.b[i] == doctest::Approx(fd).epsilon(1e-5).scale(std::max(1.0, std::abs(fd))));
    }
    const double fdc = (value(game, g, QuadraticDiscriminator(q.a, q.b, q.c + h)) -
                        value(game, g, QuadraticDiscriminator(q.a, q.b, q.c - h))) /
                       (2.0 * h);
    CHECK(grad.c == doctest::Approx(fdc).epsilon(1e-8).scale(1.0));
  }

  for (int rep = 0; rep < 24; ++rep) {
    const std::size_t dim = rep < 16 ? 1 : 2;
    const auto& family = rep % 3 == 0   ? fdiv_jsd()
                         : rep % 3 == 1 ? fdiv_kl()
                                        : fdiv_pearson_chi2();
    const Game game = Game::fgan_gauss(1.0 + 0.2 * rng.uniform(), dim, dim, family);
    const LinearGenerator g = random_generator(rng, dim, dim);
    const LogRatioDiscriminator l = random_fgan_disc(rng, dim, family);
    const DiscriminatorGradient grad = grad_discriminator(game, g, l);

    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        Matrix pp = l.p, pm = l.p;
        pp(i, j) += h;
        pm(i, j) -= h;
        if (i != j) {
          pp(j, i) += h;
          pm(j, i) -= h;
        }
        const double fd =
            (value(game, g, LogRatioDiscriminator(pp, l.q, l.r, family)) -
             value(game, g, LogRatioDiscriminator(pm, l.q, l.r, family))) /
            (2.0 * h);
        const double expected = i == j ? grad.a(i, i) : 2.0 * grad.a(i, j);
        CHECK(expected == doctest::Approx(fd).epsilon(1e-5).scale(std::max(1.0, std::abs(fd))));
      }
      Vector qp = l.q, qm = l.q;
      qp[i] += h;
      qm[i] -= h;
      const double fd = (value(game, g, LogRatioDiscriminator(l.p, qp, l.r, family)) -
                         value(game, g, LogRatioDiscriminator(l.p, qm, l.r, family))) /
                        (2.0 * h);
      CHECK(grad.b[i] == doctest::Approx(fd).epsilon(1e-5).scale(std::max(1.0, std::abs(fd))));
    }
    const double fdr = (value(game, g, LogRatioDiscriminator(l.p, l.q, l.r + h, family)) -
                        value(game, g, LogRatioDiscriminator(l.p, l.q, l.r - h, family))) /
                       (2.0 * h);
    CHECK(grad.c == doctest::Approx(fdr).epsilon(1e-5).scale(std::max(1.0, std::abs(fdr))));
  }

  const Game wg = Game::wgan_1d(1.6);
  for (int rep = 0; rep < 30; ++rep) {
    const LinearGenerator g = random_generator(rng, 1, 1);
    const PiecewiseLinearDiscriminator p = random_pl_disc(rng);
    const DiscriminatorGradient grad = grad_discriminator(wg, g, p);
    for (std::size_t i = 0; i < p.knots.size(); ++i) {
      auto vp = p.values, vm = p.values;
      vp[i] += h;
      vm[i] -= h;
      const double fd =
          (value(wg, g, PiecewiseLinearDiscriminator(p.knots, vp, p.left_slope, p.right_slope)) -
           value(wg, g, PiecewiseLinearDiscriminator(p.knots, vm, p.left_slope, p.right_slope))) /
          (2.0 * h);
      CHECK(grad.b[i] == doctest::Approx(fd).epsilon(1e-5).scale(std::max(1.0, std::abs(fd))));
    }
    const double fdl =
        (value(wg, g, PiecewiseLinearDiscriminator(p.knots, p.values, p.left_slope + h, p.right_slope)) -
         value(wg, g, PiecewiseLinearDiscriminator(p.knots, p.values, p.left_slope - h, p.right_slope))) /
        (2.0 * h);
    CHECK(grad.left_slope == doctest::Approx(fdl).epsilon(1e-5).scale(std::max(1.0, std::abs(fdl))));
    const double fdr =
        (value(wg, g, PiecewiseLinearDiscriminator(p.knots, p.values, p.left_slope, p.right_slope + h)) -
         value(wg, g, PiecewiseLinearDiscriminator(p.knots, p.values, p.left_slope, p.right_slope - h))) /
        (2.0 * h);
    CHECK(grad.right_slope == doctest::Approx(fdr).epsilon(1e-5).scale(std::max(1.0, std::abs(fdr))));
  }

  // With the zero quadratic the linear-term gradient is the mean gap.
  const Game w2 = Game::w2_lq(1.0, 2, 2, 1.0);
  const LinearGenerator g(Matrix::identity(2), Vector{0.7, -0.2}, kLooseCap);
  const DiscriminatorGradient at_zero =
      grad_discriminator(w2, g, QuadraticDiscriminator(Matrix(2, 2), Vector(2)));
  CHECK(norm2(at_zero.b - (-1.0 * g.u)) < 1e-12);
}

TEST_CASE("best responses match the appendix closed forms") {
  // Isotropic shrink: gradient slope 1 - 0.25 = 0.75 of eta/2.
  const Game w2 = Game::w2_lq(2.0, 1, 1, 1.0);
  const LinearGenerator half(Matrix{{0.5}}, Vector(1), kLooseCap);
  const Discriminator dq = best_response_disc(w2, half);
  const auto& q = std::get<QuadraticDiscriminator>(dq);
  CHECK(q.a(0, 0) == doctest::Approx(0.375));
  CHECK(q.b[0] == doctest::Approx(0.0));
  CHECK(q.c == 0.0);

  // Shifted generator: the linear term is -eta u.
  const Game w2b = Game::w2_lq(1.0, 2, 2, 2.0);
  const LinearGenerator shifted(Matrix::identity(2), Vector{0.3, -0.5}, kLooseCap);
  const Discriminator dq2 = best_response_disc(w2b, shifted);
  const auto& q2 = std::get<QuadraticDiscriminator>(dq2);
  CHECK(norm2(q2.b - Vector{-0.6, 1.0}) < 1e-12);

  // Realizable generators get the constant f'(1).
  for (const auto& family : {fdiv_jsd(), fdiv_kl(), fdiv_pearson_chi2()}) {
    const Game fg = Game::fgan_gauss(1.3, 2, 2, family);
    const LinearGenerator real(1.3 * Matrix::identity(2), Vector(2), kLooseCap);
    const Discriminator dl = best_response_disc(fg, real);
    const auto& l = std::get<LogRatioDiscriminator>(dl);
    CHECK(frobenius_norm(l.p) < 1e-9);
    CHECK(norm2(l.q) < 1e-9);
    CHECK(l.eval(Vector{0.3, -0.8}) ==
          doctest::Approx(family.f_prime(1.0)).epsilon(1e-9));
  }

  // Narrow data against a unit-width generator: the response is -|x|.
  const Game wg = Game::wgan_1d(0.5);
  const LinearGenerator unit(Matrix{{1.0}}, Vector(1), kLooseCap);
  const Discriminator dpl = best_response_disc(wg, unit);
  const auto& pl = std::get<PiecewiseLinearDiscriminator>(dpl);
  CHECK(pl.left_slope == doctest::Approx(1.0));
  CHECK(pl.right_slope == doctest::Approx(-1.0));
  for (double x : {-2.0, -0.7, 0.0, 0.4, 1.9})
    CHECK(pl.eval(x) == doctest::Approx(-std::abs(x)).epsilon(1e-3));
}

TEST_CASE("best response is stationary for the closed-form games") {
  Rng rng(53);
  for (int rep = 0; rep < 10; ++rep) {
    const Game game = Game::w2_lq(1.0 + rng.uniform(), 2, 2, 0.8 + 0.4 * rng.uniform());
    const LinearGenerator g = random_generator(rng, 2, 2);
    const DiscriminatorGradient grad =
        grad_discriminator(game, g, best_response_disc(game, g));
    CHECK(frobenius_norm(grad.a) + norm2(grad.b) + std::abs(grad.c) <= 1e-6);
  }
  for (int rep = 0; rep < 6; ++rep) {
    const auto& family = rep % 3 == 0   ? fdiv_jsd()
                         : rep % 3 == 1 ? fdiv_kl()
                                        : fdiv_pearson_chi2();
    const Game game = Game::fgan_gauss(1.0 + 0.2 * rng.uniform(), 1, 1, family);
    const LinearGenerator g = random_fgan_generator(rng, 1, 1, game.sigma());
    const DiscriminatorGradient grad =
        grad_discriminator(game, g, best_response_disc(game, g));
    CHECK(frobenius_norm(grad.a) + norm2(grad.b) + std::abs(grad.c) <= 1e-6);
  }
}

TEST_CASE("bridge response is stationary under the slope box") {
  const Game wg = Game::wgan_1d(2.0);
  const LinearGenerator g(Matrix{{1.0}}, Vector{0.4}, kLooseCap);
  const Discriminator dbr = best_response_disc(wg, g);
  const auto& pl = std::get<PiecewiseLinearDiscriminator>(dbr);
  const DiscriminatorGradient grad = grad_discriminator(wg, g, pl);
  const std::vector<double> slopes = pl.segment_slopes();
  const double h = pl.knots[1] - pl.knots[0];
  double residual = 0.0;
  double suffix = 0.0;
  for (std::size_t j = slopes.size(); j-- > 0;) {
    suffix += grad.b[j + 1];
    const double moved = std::min(1.0, std::max(-1.0, slopes[j] + h * suffix));
    residual = std::max(residual, std::abs(moved - slopes[j]));
  }
  CHECK(residual <= 1e-6);
}

TEST_CASE("best response maximizes over random feasible discriminators") {
  Rng rng(54);

  const Game w2 = Game::w2_lq(1.8, 2, 2, 1.0);
  const LinearGenerator gw2 = random_generator(rng, 2, 2);
  const double vw2 = value(w2, gw2, best_response_disc(w2, gw2));
  for (int rep = 0; rep < 200; ++rep)
    CHECK(vw2 >= value(w2, gw2, random_w2_disc(rng, 2, w2.eta)) - 1e-6);
  CHECK(vw2 >= -1e-8);

  const Game fg = Game::fgan_gauss(1.2, 1, 1, fdiv_jsd());
  const LinearGenerator gfg = random_generator(rng, 1, 1);
  const double vfg = value(fg, gfg, best_response_disc(fg, gfg));
  for (int rep = 0; rep < 200; ++rep)
    CHECK(vfg >= value(fg, gfg, random_fgan_disc(rng, 1, fdiv_jsd())) - 1e-6);
  CHECK(vfg >= -1e-8);

  const Game wg = Game::wgan_1d(2.0);
  const LinearGenerator gwg(Matrix{{0.8}}, Vector{0.5}, kLooseCap);
  const double vwg = value(wg, gwg, best_response_disc(wg, gwg));
  for (int rep = 0; rep < 200; ++rep)
    CHECK(vwg >= value(wg, gwg, random_pl_disc(rng)) - 1e-6);
  CHECK(vwg >= -1e-8);
}

TEST_CASE("saddle structure at realizable generators") {
  Rng rng(55);

  // Transport games: D = 0 zeroes the value everywhere, and any feasible
  // discriminator scores nonpositive when the generator matches the data.
  const Game w2 = Game::w2_lq(1.5, 2, 2, 1.0);
  const LinearGenerator real_w2(1.5 * Matrix::identity(2), Vector(2), kLooseCap);
  const Discriminator zero_q = QuadraticDiscriminator(Matrix(2, 2), Vector(2));
  for (int rep = 0; rep < 50; ++rep) {
    CHECK(value(w2, real_w2, random_w2_disc(rng, 2, w2.eta)) <= 1e-9);
    CHECK(value(w2, random_generator(rng, 2, 2), zero_q) == doctest::Approx(0.0));
  }

  const Game fg = Game::fgan_gauss(1.0, 1, 1, fdiv_jsd());
  const LinearGenerator real_fg(Matrix{{1.0}}, Vector(1), kLooseCap);
  const Discriminator flat = LogRatioDiscriminator(Matrix(1, 1), Vector(1), 0.0, fdiv_jsd());
  for (int rep = 0; rep < 50; ++rep) {
    CHECK(value(fg, real_fg, random_fgan_disc(rng, 1, fdiv_jsd())) <= 1e-9);
    CHECK(value(fg, random_generator(rng, 1, 1), flat) == doctest::Approx(0.0).epsilon(1e-9));
  }

  const Game wg = Game::wgan_1d(1.1);
  const LinearGenerator real_wg(Matrix{{1.1}}, Vector(1), kLooseCap);
  const Discriminator zero_pl = PiecewiseLinearDiscriminator({0.0}, {0.0}, 0.0, 0.0);
  for (int rep = 0; rep < 50; ++rep) {
    CHECK(value(wg, real_wg, random_pl_disc(rng)) <= 1e-9);
    CHECK(value(wg, random_generator(rng, 1, 1), zero_pl) == doctest::Approx(0.0));
  }
}

TEST_CASE("dual value agrees with the independent oracles") {
  Rng rng(56);

  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t dim = 1 + rep % 3;
    const Game game = Game::w2_lq(1.0 + rng.uniform(), dim, dim, 0.7 + rng.uniform());
    const DualPrimalReport r =
        dual_equals_primal_check(game, random_generator(rng, dim, dim));
    CHECK(r.pass);
    CHECK(std::abs(r.dual_value - r.oracle_value) <= 1e-5);
    CHECK(std::abs(r.dual_value - r.sobolev_value) <= 1e-5);
  }

  // Realizable: every route reports zero.
  const Game w2 = Game::w2_lq(2.0, 2, 2, 1.0);
  const DualPrimalReport real_r = dual_equals_primal_check(
      w2, LinearGenerator(2.0 * Matrix::identity(2), Vector(2), kLooseCap));
  CHECK(real_r.pass);
  CHECK(real_r.dual_value == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(real_r.oracle_value == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(real_r.sobolev_value == doctest::Approx(0.0).epsilon(1e-10));

  for (int rep = 0; rep < 6; ++rep) {
    const auto& family = rep % 3 == 0   ? fdiv_jsd()
                         : rep % 3 == 1 ? fdiv_kl()
                                        : fdiv_pearson_chi2();
    const Game game = Game::fgan_gauss(1.0 + 0.2 * rng.uniform(), 1, 1, family);
    const DualPrimalReport r = dual_equals_primal_check(
        game, random_fgan_generator(rng, 1, 1, game.sigma()));
    CHECK(r.pass);
  }

  const Game wg = Game::wgan_1d(2.0);
  const DualPrimalReport wr =
      dual_equals_primal_check(wg, LinearGenerator(Matrix{{1.0}}, Vector(1), kLooseCap));
  CHECK(wr.pass);
  CHECK(std::abs(wr.dual_value - wr.oracle_value) <= 1e-3);
  CHECK(wr.oracle_value == doctest::Approx(0.7978845608028654).epsilon(1e-5));

  // Equal widths take the one-signed branch.
  const DualPrimalReport shift_r = dual_equals_primal_check(
      wg, LinearGenerator(Matrix{{2.0}}, Vector{1.2}, kLooseCap));
  CHECK(shift_r.pass);
  CHECK(shift_r.dual_value == doctest::Approx(1.2).epsilon(1e-6));
}

}  // TEST_SUITE

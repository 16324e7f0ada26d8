#include "doctest.h"
#include "proxeq/discriminator.hpp"
#include "proxeq/rng.hpp"

#include <cmath>
#include <stdexcept>

using namespace proxeq;

namespace {

// Central finite difference of value along coordinate k.
double fd_grad(const Discriminator& d, Vector x, std::size_t k, double h = 1e-5) {
  x[k] += h;
  const double up = eval_and_grad(d, x).value;
  x[k] -= 2.0 * h;
  const double dn = eval_and_grad(d, x).value;
  return (up - dn) / (2.0 * h);
}

void check_grad_matches_fd(const Discriminator& d, const Vector& x) {
  const EvalResult r = eval_and_grad(d, x);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double fd = fd_grad(d, x, k);
    CHECK(std::abs(r.grad[k] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

}  // namespace

TEST_SUITE("discriminator") {

TEST_CASE("f-divergence tables pass their own validation") {
  CHECK_NOTHROW(fdiv_jsd().validate());
  CHECK_NOTHROW(fdiv_kl().validate());
  CHECK_NOTHROW(fdiv_pearson_chi2().validate());
  CHECK_THROWS_AS(fdiv_by_name("hellinger"), std::invalid_argument);

  // A deliberately corrupted conjugate is caught.
  FDivergenceSpec bad = fdiv_kl();
  bad.f_conj = [](double u) { return std::exp(u); };
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  FDivergenceSpec shifted = fdiv_kl();
  shifted.f = [](double t) { return t * std::log(t) + 1e-6; };
  CHECK_THROWS_AS(shifted.validate(), std::invalid_argument);
}

TEST_CASE("quadratic evaluation and gradient") {
  const QuadraticDiscriminator d(Matrix::identity(2), Vector(2));
  const EvalResult r = eval_and_grad(Discriminator{d}, Vector{1.0, 1.0});
  CHECK(r.value == 2.0);
  CHECK(r.grad[0] == 2.0);
  CHECK(r.grad[1] == 2.0);
  CHECK_FALSE(r.at_kink);

  CHECK_THROWS_AS(QuadraticDiscriminator(Matrix{{0.0, 1.0}, {0.0, 0.0}}, Vector(2)),
                  std::invalid_argument);
}

TEST_CASE("negative absolute value as a piecewise-linear function") {
  const PiecewiseLinearDiscriminator d({0.0}, {0.0}, 1.0, -1.0);
  CHECK(d.eval(1.0) == -1.0);
  CHECK(d.eval(-2.0) == -2.0);
  CHECK(d.deriv(1.0) == -1.0);
  CHECK(d.deriv(-1.0) == 1.0);

  bool kink = false;
  const double slope_at_zero = d.deriv(0.0, &kink);
  CHECK(kink);
  CHECK(slope_at_zero == -1.0);  // right-hand choice

  const EvalResult r = eval_and_grad(Discriminator{d}, Vector{1.0});
  CHECK(r.value == -1.0);
  CHECK(r.grad[0] == -1.0);
  CHECK_FALSE(r.at_kink);
  CHECK_THROWS_AS(eval_and_grad(Discriminator{d}, Vector{1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("log-ratio discriminator at the density-equal point") {
  // P = 0, q = 0, r = 0 makes the ratio exp(0) = 1 everywhere.
  const LogRatioDiscriminator d(Matrix(2, 2), Vector(2), 0.0, fdiv_jsd());
  const EvalResult r = eval_and_grad(Discriminator{d}, Vector{0.3, -0.7});
  CHECK(r.value == doctest::Approx(0.0));  // f'_jsd(1) = 0
  CHECK(norm2(r.grad) == doctest::Approx(0.0));

  const LogRatioDiscriminator kl(Matrix(2, 2), Vector(2), 0.0, fdiv_kl());
  CHECK(kl.eval(Vector{1.0, 1.0}) == doctest::Approx(1.0));  // f'_kl(1) = 1
}

TEST_CASE("gradients match finite differences at random points") {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    Matrix a(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = rng.normal();
    const QuadraticDiscriminator quad(symmetrize(a), rng.normal_vector(3), rng.normal());
    check_grad_matches_fd(Discriminator{quad}, rng.normal_vector(3));
  }
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> knots{-2.0, -0.5, 1.0, 2.5};
    std::vector<double> values;
    for (std::size_t i = 0; i < knots.size(); ++i) values.push_back(rng.normal());
    const PiecewiseLinearDiscriminator pl(knots, values, rng.normal(), rng.normal());
    // Sample inside a segment, away from the knots.
    const double x = rng.uniform(-0.4, 0.9);
    check_grad_matches_fd(Discriminator{pl}, Vector{x});
  }
  for (const auto& family : {fdiv_jsd(), fdiv_kl(), fdiv_pearson_chi2()}) {
    for (int rep = 0; rep < 100; ++rep) {
      Matrix p(2, 2);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) p(i, j) = 0.3 * rng.normal();
      const LogRatioDiscriminator lr(symmetrize(p), 0.3 * rng.normal_vector(2),
                                     0.2 * rng.normal(), family);
      check_grad_matches_fd(Discriminator{lr}, 0.5 * rng.normal_vector(2));
    }
  }
}

TEST_CASE("project_lipschitz clips slopes and keeps the leftmost value") {
  // Slopes (2, -0.5) over unit-width segments.
  const PiecewiseLinearDiscriminator d({0.0, 1.0, 2.0}, {0.0, 2.0, 1.5}, 0.0, 0.0);
  const PiecewiseLinearDiscriminator p = project_lipschitz(d, 1.0);
  const auto slopes = p.segment_slopes();
  CHECK(slopes[0] == 1.0);
  CHECK(slopes[1] == -0.5);
  CHECK(p.values[0] == 0.0);
  CHECK(p.max_abs_slope() <= 1.0 + 1e-12);

  // Already feasible: unchanged.
  const PiecewiseLinearDiscriminator q = project_lipschitz(p, 1.0);
  for (std::size_t i = 0; i < q.values.size(); ++i)
    CHECK(q.values[i] == p.values[i]);

  // -3|x| sampled on knots becomes -|x| shifted to keep the left value.
  const PiecewiseLinearDiscriminator steep({-1.0, 0.0, 1.0}, {-3.0, 0.0, -3.0}, 3.0, -3.0);
  const PiecewiseLinearDiscriminator flat = project_lipschitz(steep, 1.0);
  CHECK(flat.values[0] == -3.0);
  CHECK(flat.segment_slopes()[0] == 1.0);
  CHECK(flat.segment_slopes()[1] == -1.0);
  CHECK(flat.left_slope == 1.0);
  CHECK(flat.right_slope == -1.0);
  CHECK(flat.max_abs_slope() <= 1.0 + 1e-12);
}

TEST_CASE("project_c_concave clips the quadratic part only") {
  const QuadraticDiscriminator zero(Matrix(2, 2), Vector{1.0, -1.0});
  const QuadraticDiscriminator pz = project_c_concave(zero, 1.0);
  CHECK(frobenius_norm(pz.a - zero.a) == 0.0);
  CHECK(pz.b[0] == 1.0);

  const QuadraticDiscriminator eye(Matrix::identity(2), Vector(2));
  const QuadraticDiscriminator pe = project_c_concave(eye, 1.0);
  CHECK(pe.a(0, 0) == doctest::Approx(0.5 - kCConcaveMargin));
  CHECK(pe.a(1, 1) == doctest::Approx(0.5 - kCConcaveMargin));
  CHECK(is_c_concave(pe, 1.0));
  CHECK_FALSE(is_c_concave(eye, 1.0));

  // Feasible input passes through bit-identically.
  const QuadraticDiscriminator inside(0.1 * Matrix::identity(2), Vector{0.5, 0.5});
  const QuadraticDiscriminator pi = project_c_concave(inside, 1.0);
  CHECK(frobenius_norm(pi.a - inside.a) == 0.0);

  // The loose convention admits a larger set.
  CHECK(is_c_concave(QuadraticDiscriminator(0.8 * Matrix::identity(2), Vector(2)), 1.0,
                     0.0, CConcaveConvention::kLooseBound));
  CHECK_FALSE(is_c_concave(QuadraticDiscriminator(0.8 * Matrix::identity(2), Vector(2)), 1.0));
}

}  // TEST_SUITE

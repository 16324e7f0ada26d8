#include "proxeq/oracles.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace proxeq {

double w2_gaussian(const Gaussian& p, const Gaussian& q, double eta) {
  if (p.dim() != q.dim())
    throw std::invalid_argument("w2_gaussian: dimension mismatch");
  if (!(eta > 0.0)) throw std::invalid_argument("w2_gaussian: eta must be positive");
  const Vector dm = p.mean - q.mean;
  const Matrix sq = matrix_sqrt_psd(q.cov);
  const Matrix inner = matrix_sqrt_psd(symmetrize(matmul(matmul(sq, p.cov), sq)));
  const double bures = trace(p.cov) + trace(q.cov) - 2.0 * trace(inner);
  // The Bures term is nonnegative; tiny negatives are eigensolver roundoff.
  return 0.5 * eta * (dot(dm, dm) + std::max(bures, 0.0));
}

LinearMap brenier_map_gaussian(double sigma, const Matrix& w, const Vector& u) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("brenier_map_gaussian: sigma must be positive");
  if (w.rows() != u.size())
    throw std::invalid_argument("brenier_map_gaussian: shift size mismatch");
  const Matrix root = matrix_sqrt_psd(symmetrize(matmul(w, transpose(w))));
  return LinearMap{(1.0 / sigma) * root, u};
}

namespace {

// log N(x; 0, sigma^2) - log N(x; u, w^2), an exact quadratic.
double log_density_gap(double x, double sigma, double w, double u) {
  const double aw = std::abs(w);
  const double zp = x / sigma;
  const double zq = (x - u) / aw;
  return 0.5 * zq * zq - 0.5 * zp * zp + std::log(aw / sigma);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double w1_1d(const Gaussian& p, const Gaussian& q, const QuadratureSpec& quad) {
  if (p.dim() != 1 || q.dim() != 1)
    throw std::invalid_argument("w1_1d: needs one-dimensional Gaussians");
  quad.validate();
  const double vp = p.cov(0, 0), vq = q.cov(0, 0);
  if (!(vp > 0.0) || !(vq > 0.0))
    throw std::invalid_argument("w1_1d: needs nondegenerate Gaussians");
  for (const Gaussian* g : {&p, &q}) {
    const double tail = gaussian_cdf(quad.lo, g->mean[0], g->cov(0, 0)) +
                        1.0 - gaussian_cdf(quad.hi, g->mean[0], g->cov(0, 0));
    if (tail > 1e-10)
      throw std::invalid_argument(
          "w1_1d: window [" + std::to_string(quad.lo) + ", " + std::to_string(quad.hi) +
          "] leaves tail mass " + std::to_string(tail) + " outside; enlarge it");
  }
  const double mp = p.mean[0], mq = q.mean[0];
  auto cdf_gap = [&](double x) {
    return gaussian_cdf(x, mp, vp) - gaussian_cdf(x, mq, vq);
  };
  auto segment = [&](double a, double b) {
    QuadratureSpec panel = quad;
    panel.lo = a;
    panel.hi = b;
    return integrate(panel, [&](double x) { return std::abs(cdf_gap(x)); });
  };
  // |F_p - F_q| has one interior kink when the variances differ: the unique
  // CDF crossing, which lies between the two density crossings. Splitting the
  // window there keeps each panel smooth, so the rule converges at full order.
  if (std::abs(vp - vq) > 1e-9 * std::max(vp, vq)) {
    const auto [c1, c2] = density_crossings_1d(std::sqrt(vp), std::sqrt(vq), mq - mp);
    const double b1 = c1 + mp, b2 = c2 + mp;
    if (cdf_gap(b1) * cdf_gap(b2) < 0.0) {
      const double m = bisect_root(cdf_gap, b1, b2);
      if (m > quad.lo && m < quad.hi) return segment(quad.lo, m) + segment(m, quad.hi);
    }
  }
  return integrate(quad, [&](double x) { return std::abs(cdf_gap(x)); });
}

namespace {

// Tensor-product quadrature over [lo,hi]^dim with the 1-D grid from `quad`.
double tensor_integrate(std::size_t dim, const QuadratureSpec& quad,
                        const std::function<double(const Vector&)>& fn) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("quadrature oracle supports dimensions 1 to 3, got " +
                                std::to_string(dim));
  const QuadratureGrid g = make_grid(quad);
  const std::size_t n = g.nodes.size();
  std::size_t total = 1;
  for (std::size_t d = 0; d < dim; ++d) total *= n;
  std::vector<double> terms(total);
  Vector x(dim);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double wgt = 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const std::size_t i = rem % n;
      rem /= n;
      x[d] = g.nodes[i];
      wgt *= g.weights[i];
    }
    terms[flat] = wgt * fn(x);
  }
  return pairwise_sum(terms);
}

std::string point_to_string(const Vector& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i)
    s += (i ? ", " : "") + std::to_string(x[i]);
  return s + ")";
}

void require_strictly_pd(const Gaussian& g, const char* who) {
  const SymEig eig = sym_eig(g.cov);
  if (eig.values[0] <= 1e-10)
    throw std::domain_error(std::string(who) + ": degenerate Gaussian, covariance eigenvalue " +
                            std::to_string(eig.values[0]));
}

}  // namespace

double f_divergence_quadrature(const FDivergenceSpec& spec, const Gaussian& p,
                               const Gaussian& q, const QuadratureSpec& quad) {
  if (p.dim() != q.dim())
    throw std::invalid_argument("f_divergence_quadrature: dimension mismatch");
  require_strictly_pd(p, "f_divergence_quadrature");
  require_strictly_pd(q, "f_divergence_quadrature");
  const double value = tensor_integrate(p.dim(), quad, [&](const Vector& x) {
    const double lp = log_density(p, x);
    const double lq = log_density(q, x);
    if (std::max(lp, lq) < -700.0) return 0.0;  // both densities below 1e-304
    const double integrand = std::exp(lp) * spec.f(std::exp(lq - lp));
    if (!std::isfinite(integrand))
      throw std::domain_error("f_divergence_quadrature: integrand overflow at x = " +
                              point_to_string(x));
    return integrand;
  });
  if (value < -1e-9)
    throw std::domain_error("f_divergence_quadrature: value " + std::to_string(value) +
                            " below the -1e-9 nonnegativity tolerance");
  return value;
}

LogRatioDiscriminator optimal_f_discriminator(const FDivergenceSpec& spec,
                                              const Gaussian& p, const Gaussian& q) {
  if (p.dim() != q.dim())
    throw std::invalid_argument("optimal_f_discriminator: dimension mismatch");
  require_strictly_pd(p, "optimal_f_discriminator");
  require_strictly_pd(q, "optimal_f_discriminator");
  const Matrix ip = inverse_spd(p.cov, 1e-10);
  const Matrix iq = inverse_spd(q.cov, 1e-10);
  // log p(x) - log q(x) as (1/2) x^T P x + qvec^T x + r.
  const Matrix big_p = iq - ip;
  const Vector qvec = matvec(ip, p.mean) - matvec(iq, q.mean);
  const double r = 0.5 * (dot(q.mean, matvec(iq, q.mean)) - dot(p.mean, matvec(ip, p.mean))) +
                   0.5 * (log_det_spd(q.cov) - log_det_spd(p.cov));
  return LogRatioDiscriminator(big_p, qvec, r, spec);
}

double f_variational_value(const LogRatioDiscriminator& d, const Gaussian& p,
                           const Gaussian& q, const QuadratureSpec& quad) {
  if (p.dim() != q.dim() || p.dim() != d.dim())
    throw std::invalid_argument("f_variational_value: dimension mismatch");
  require_strictly_pd(p, "f_variational_value");
  require_strictly_pd(q, "f_variational_value");
  return tensor_integrate(p.dim(), quad, [&](const Vector& x) {
    const double lp = log_density(p, x);
    const double lq = log_density(q, x);
    if (std::max(lp, lq) < -700.0) return 0.0;
    const double dval = d.eval(x);
    const double integrand = std::exp(lp) * dval - std::exp(lq) * d.family.f_conj(dval);
    if (!std::isfinite(integrand))
      throw std::domain_error("f_variational_value: integrand overflow at x = " +
                              point_to_string(x));
    return integrand;
  });
}

QuadraticDiscriminator c_transform_quadratic(const QuadraticDiscriminator& d, double eta) {
  if (!(eta > 0.0))
    throw std::invalid_argument("c_transform_quadratic: eta must be positive");
  // Finite supremum needs eta I - 2A positive definite, with margin.
  Matrix m2 = eta * Matrix::identity(d.dim()) - 2.0 * d.a;
  const SymEig eig = sym_eig(m2);
  if (eig.values[0] < 1e-8)
    throw std::domain_error("c_transform_quadratic: not strictly c-concave, eigenvalue of "
                            "(eta I - 2A) is " + std::to_string(eig.values[0]));
  const Matrix m_inv = inverse_spd(0.5 * m2);  // ((eta/2) I - A)^{-1}
  Matrix a_c = symmetrize(0.25 * eta * eta * m_inv - 0.5 * eta * Matrix::identity(d.dim()));
  Vector b_c = 0.5 * eta * matvec(m_inv, d.b);
  const double c_c = 0.25 * dot(d.b, matvec(m_inv, d.b)) + d.c;
  return QuadraticDiscriminator(std::move(a_c), std::move(b_c), c_c);
}

QuadraticDiscriminator c_inf_convolution_quadratic(const QuadraticDiscriminator& d,
                                                   double eta) {
  if (!(eta > 0.0))
    throw std::invalid_argument("c_inf_convolution_quadratic: eta must be positive");
  Matrix n2 = eta * Matrix::identity(d.dim()) + 2.0 * d.a;
  const SymEig eig = sym_eig(n2);
  if (eig.values[0] < 1e-8)
    throw std::domain_error("c_inf_convolution_quadratic: infimum not attained, eigenvalue of "
                            "(eta I + 2A) is " + std::to_string(eig.values[0]));
  const Matrix n_inv = inverse_spd(0.5 * n2);  // (A + (eta/2) I)^{-1}
  Matrix a_r = symmetrize(0.5 * eta * Matrix::identity(d.dim()) - 0.25 * eta * eta * n_inv);
  Vector b_r = 0.5 * eta * matvec(n_inv, d.b);
  const double c_r = d.c - 0.25 * dot(d.b, matvec(n_inv, d.b));
  return QuadraticDiscriminator(std::move(a_r), std::move(b_r), c_r);
}

std::pair<double, double> density_crossings_1d(double sigma, double w, double u) {
  if (!(sigma > 0.0) || w == 0.0)
    throw std::invalid_argument("density_crossings_1d: needs sigma > 0 and w != 0");
  const double aw = std::abs(w);
  if (aw == sigma)
    throw std::invalid_argument("density_crossings_1d: equal widths give at most one crossing");
  auto gap = [&](double x) { return log_density_gap(x, sigma, w, u); };
  // The gap is a parabola; its vertex sits between the two roots.
  const double vertex = u * sigma * sigma / (sigma * sigma - w * w);
  const double at_vertex = gap(vertex);
  if (at_vertex == 0.0)
    throw std::runtime_error("density_crossings_1d: densities tangent at the vertex");
  double step = std::max({sigma, aw, std::abs(u), 1.0});
  double lo = vertex - step, hi = vertex + step;
  for (int grow = 0; grow < 200 && (gap(lo) < 0.0) == (at_vertex < 0.0); ++grow) {
    lo -= step;
    step *= 2.0;
  }
  step = std::max({sigma, aw, std::abs(u), 1.0});
  for (int grow = 0; grow < 200 && (gap(hi) < 0.0) == (at_vertex < 0.0); ++grow) {
    hi += step;
    step *= 2.0;
  }
  if ((gap(lo) < 0.0) == (at_vertex < 0.0) || (gap(hi) < 0.0) == (at_vertex < 0.0))
    throw std::runtime_error("density_crossings_1d: no sign change found");
  const double a1 = bisect_root(gap, lo, vertex);
  const double a2 = bisect_root(gap, vertex, hi);
  return {std::min(a1, a2), std::max(a1, a2)};
}

std::pair<double, double> wgan1d_density_crossings(double sigma, double w, double u) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("wgan1d_density_crossings: sigma must be positive");
  if (w == 0.0 || std::abs(w) >= sigma)
    throw std::invalid_argument("wgan1d_density_crossings: requires 0 < |w| < sigma, got w = " +
                                std::to_string(w) + ", sigma = " + std::to_string(sigma));
  return density_crossings_1d(sigma, w, u);
}

}  // namespace proxeq

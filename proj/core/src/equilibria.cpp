#include "proxeq/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <variant>

#include "discriminator_params.hpp"
#include "proxeq/linalg.hpp"
#include "proxeq/parallel.hpp"
#include "proxeq/proximal.hpp"

namespace proxeq {
namespace {

using detail::ParamSpace;

constexpr const char* kGridScopeNote =
    "Certified on the recorded grid points only; the claim is not checked off-grid.";

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Acklam's rational approximation to the standard normal quantile, polished
// with one Newton step through the erfc-based CDF.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return x - (normal_cdf(x) - p) / pdf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string describe(const LinearGenerator& g) {
  std::string s = "g(w=[";
  for (std::size_t i = 0; i < g.w.rows(); ++i)
    for (std::size_t j = 0; j < g.w.cols(); ++j)
      s += fmt(g.w(i, j)) + (i + 1 == g.w.rows() && j + 1 == g.w.cols() ? "" : " ");
  s += "], u=[";
  for (std::size_t i = 0; i < g.u.size(); ++i)
    s += fmt(g.u[i]) + (i + 1 == g.u.size() ? "" : " ");
  return s + "])";
}

std::string describe(const Discriminator& d) {
  if (const auto* q = std::get_if<QuadraticDiscriminator>(&d)) {
    std::string s = "quad(A=[";
    for (std::size_t i = 0; i < q->a.rows(); ++i)
      for (std::size_t j = 0; j < q->a.cols(); ++j)
        s += fmt(q->a(i, j)) + (i + 1 == q->a.rows() && j + 1 == q->a.cols() ? "" : " ");
    s += "], b=[";
    for (std::size_t i = 0; i < q->b.size(); ++i)
      s += fmt(q->b[i]) + (i + 1 == q->b.size() ? "" : " ");
    return s + "], c=" + fmt(q->c) + ")";
  }
  if (const auto* l = std::get_if<LogRatioDiscriminator>(&d)) {
    std::string s = "logratio(P=[";
    for (std::size_t i = 0; i < l->p.rows(); ++i)
      for (std::size_t j = 0; j < l->p.cols(); ++j)
        s += fmt(l->p(i, j)) + (i + 1 == l->p.rows() && j + 1 == l->p.cols() ? "" : " ");
    s += "], q=[";
    for (std::size_t i = 0; i < l->q.size(); ++i)
      s += fmt(l->q[i]) + (i + 1 == l->q.size() ? "" : " ");
    return s + "], r=" + fmt(l->r) + ")";
  }
  const auto& p = std::get<PiecewiseLinearDiscriminator>(d);
  return "pl(" + std::to_string(p.knots.size()) + " knots on [" + fmt(p.knots.front()) +
         ", " + fmt(p.knots.back()) + "])";
}

// Flat coordinates for the generator, mirroring the discriminator's
// ParamSpace so both players share the probing machinery.
struct GenSpace {
  const LinearGenerator& ref;

  std::size_t size() const { return ref.w.rows() * ref.w.cols() + ref.u.size(); }

  Vector pack(const LinearGenerator& g) const {
    Vector theta(size());
    std::size_t at = 0;
    for (std::size_t i = 0; i < g.w.rows(); ++i)
      for (std::size_t j = 0; j < g.w.cols(); ++j) theta[at++] = g.w(i, j);
    for (std::size_t i = 0; i < g.u.size(); ++i) theta[at++] = g.u[i];
    return theta;
  }

  LinearGenerator unpack(const Vector& theta) const {
    Matrix w(ref.w.rows(), ref.w.cols());
    std::size_t at = 0;
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) = theta[at++];
    Vector u(ref.u.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = theta[at++];
    return LinearGenerator(std::move(w), std::move(u), ref.constraint);
  }

  Vector project(const Vector& theta) const {
    LinearGenerator g = unpack(theta);
    g.project();
    return pack(g);
  }

  Vector pack_grad(const GeneratorGradient& gg) const {
    Vector out(size());
    std::size_t at = 0;
    for (std::size_t i = 0; i < gg.w.rows(); ++i)
      for (std::size_t j = 0; j < gg.w.cols(); ++j) out[at++] = gg.w(i, j);
    for (std::size_t i = 0; i < gg.u.size(); ++i) out[at++] = gg.u[i];
    return out;
  }
};

Vector axis(std::size_t n, std::size_t k) {
  Vector v(n);
  v[k] = 1.0;
  return v;
}

// Probe directions for the discriminator's second-order test. Matrix blocks
// move symmetric pairs together so unpack always sees a symmetric matrix.
std::vector<Vector> disc_directions(const ParamSpace& space) {
  const std::size_t n = space.size();
  std::vector<Vector> dirs;
  if (std::holds_alternative<PiecewiseLinearDiscriminator>(space.warm)) {
    for (std::size_t k = 0; k < n; ++k) dirs.push_back(axis(n, k));
    return dirs;
  }
  const bool log_ratio = std::holds_alternative<LogRatioDiscriminator>(space.warm);
  const std::size_t d = log_ratio ? std::get<LogRatioDiscriminator>(space.warm).dim()
                                  : std::get<QuadraticDiscriminator>(space.warm).dim();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i) dirs.push_back(axis(n, i * d + i));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      Vector v(n);
      v[i * d + j] = inv_sqrt2;
      v[j * d + i] = inv_sqrt2;
      dirs.push_back(std::move(v));
    }
  for (std::size_t k = 0; k < d; ++k) dirs.push_back(axis(n, d * d + k));
  if (log_ratio) dirs.push_back(axis(n, d * d + d));
  return dirs;
}

// Whether a step of length h from theta along dir stays inside the feasible
// set, up to projection roundoff.
template <typename ProjectFn>
bool step_feasible(const ProjectFn& project, const Vector& theta, const Vector& dir,
                   double h) {
  const Vector moved = theta + h * dir;
  return norm2(project(moved) - moved) <= 1e-9;
}

// Finite-difference Hessian of phi restricted to span(dirs).
template <typename Fn>
Matrix fd_hessian(const Fn& phi, const Vector& theta, const std::vector<Vector>& dirs,
                  double h) {
  const std::size_t m = dirs.size();
  Matrix hess(m, m);
  const double base = phi(theta);
  for (std::size_t k = 0; k < m; ++k) {
    hess(k, k) = (phi(theta + h * dirs[k]) - 2.0 * base + phi(theta - h * dirs[k])) / (h * h);
    for (std::size_t l = k + 1; l < m; ++l) {
      const double pp = phi(theta + h * dirs[k] + h * dirs[l]);
      const double pm = phi(theta + h * dirs[k] - h * dirs[l]);
      const double mp = phi(theta - h * dirs[k] + h * dirs[l]);
      const double mm = phi(theta - h * dirs[k] - h * dirs[l]);
      hess(k, l) = hess(l, k) = (pp - pm - mp + mm) / (4.0 * h * h);
    }
  }
  return hess;
}

// Second-order probe of phi at theta over the feasible directions: eigen
// range of the Hessian on the two-way feasible span, plus one-sided second
// differences along boundary directions whose slope vanishes (only those
// belong to the critical cone; a strictly sloped ray decides at first
// order).
struct CurvatureRange {
  double eig_min = std::numeric_limits<double>::infinity();
  double eig_max = -std::numeric_limits<double>::infinity();
};

template <typename Fn, typename ProjectFn>
CurvatureRange feasible_curvature(const Fn& phi, const ProjectFn& project,
                                  const Vector& theta, const Vector& grad,
                                  const std::vector<Vector>& dirs, double slope_tol) {
  const double h = 1e-4 * (1.0 + norm2(theta));
  std::vector<Vector> lineality;
  CurvatureRange range;
  bool have_one_sided = false;
  for (const Vector& v : dirs) {
    const bool plus = step_feasible(project, theta, v, h);
    const bool minus = step_feasible(project, theta, -1.0 * v, h);
    if (plus && minus) {
      lineality.push_back(v);
      continue;
    }
    if (!plus && !minus) continue;
    const Vector ray = plus ? v : -1.0 * v;
    if (std::abs(dot(grad, ray)) > slope_tol) continue;
    const double curv =
        (phi(theta + 2.0 * h * ray) - 2.0 * phi(theta + h * ray) + phi(theta)) / (h * h);
    range.eig_min = std::min(range.eig_min, curv);
    range.eig_max = std::max(range.eig_max, curv);
    have_one_sided = true;
  }
  if (!lineality.empty()) {
    const SymEig eig = sym_eig(fd_hessian(phi, theta, lineality, h));
    range.eig_min = std::min(range.eig_min, eig.values[0]);
    range.eig_max = std::max(range.eig_max, eig.values[eig.values.size() - 1]);
  } else if (!have_one_sided) {
    // Fully pinned point: no feasible second-order direction, nothing to
    // contradict optimality.
    range.eig_min = range.eig_max = 0.0;
  }
  return range;
}

ConditionResult skipped(std::string name, std::string why) {
  ConditionResult c;
  c.name = std::move(name);
  c.pass = true;
  c.note = "skipped: " + std::move(why);
  return c;
}

void finish_verdict(EquilibriumReport& report) {
  for (const ConditionResult& c : report.conditions)
    if (!c.pass) {
      report.verdict = "fail";
      return;
    }
  report.verdict = "pass";
}

// Exact E[(a'(X) - b'(X))^2] for X ~ N(0, sigma^2) and piecewise-linear a, b:
// the integrand is constant between consecutive breakpoints of either
// function, so the expectation is a finite sum of Gaussian interval masses.
double grad_diff_sq_mean(double sigma, const PiecewiseLinearDiscriminator& a,
                         const PiecewiseLinearDiscriminator& b) {
  auto slope_at = [](const PiecewiseLinearDiscriminator& p, double x) {
    if (x < p.knots.front()) return p.left_slope;
    if (x >= p.knots.back()) return p.right_slope;
    std::size_t lo = 0, hi = p.knots.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (p.knots[mid] <= x ? lo : hi) = mid;
    }
    return (p.values[lo + 1] - p.values[lo]) / (p.knots[lo + 1] - p.knots[lo]);
  };
  std::vector<double> cuts;
  cuts.reserve(a.knots.size() + b.knots.size());
  cuts.insert(cuts.end(), a.knots.begin(), a.knots.end());
  cuts.insert(cuts.end(), b.knots.begin(), b.knots.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0, prev_cdf = 0.0, prev_cut = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const double cut = i < cuts.size() ? cuts[i] : std::numeric_limits<double>::infinity();
    const double cdf = i < cuts.size() ? normal_cdf(cut / sigma) : 1.0;
    const double mass = cdf - prev_cdf;
    if (mass > 0.0) {
      const double mid = std::isinf(prev_cut) ? cut - 1.0
                         : std::isinf(cut)    ? prev_cut + 1.0
                                              : 0.5 * (prev_cut + cut);
      const double ds = slope_at(a, mid) - slope_at(b, mid);
      total += ds * ds * mass;
    }
    prev_cdf = cdf;
    prev_cut = cut;
  }
  return total;
}

// Spectral range of (W W^T)^{1/2} through the symmetric eigenvalues of WW^T.
std::pair<double, double> singular_range(const Matrix& w) {
  const SymEig eig = sym_eig(matmul(w, transpose(w)));
  const double lo = std::max(eig.values[0], 0.0);
  const double hi = std::max(eig.values[eig.values.size() - 1], 0.0);
  return {std::sqrt(lo), std::sqrt(hi)};
}

}  // namespace

EquilibriumReport check_local_nash(const Game& game, const LinearGenerator& g,
                                   const Discriminator& d, double tol) {
  game.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("check_local_nash: tol must be positive");
  if (!g.feasible(1e-9))
    throw std::invalid_argument("check_local_nash: generator violates its constraint");
  const double tol2 = 10.0 * tol;

  EquilibriumReport report;
  report.claim = "local_nash";
  report.points = {describe(g), describe(d)};

  const GenSpace gs{g};
  const ParamSpace ds{game, d};
  const Vector gtheta = gs.pack(g);
  const Vector dtheta = ds.pack(d);
  const Vector ggrad = gs.pack_grad(grad_generator(game, g, d));
  const Vector dgrad = ds.value_grad(g, d);
  auto project_gen = [&](const Vector& th) { return gs.project(th); };
  auto project_disc = [&](const Vector& th) { return ds.project(th); };

  const double step = 1e-4;
  const double gen_res = norm2(project_gen(gtheta - step * ggrad) - gtheta) / step;
  report.conditions.push_back({"generator projected stationarity", gen_res, tol - gen_res,
                               tol, gen_res <= tol, ""});
  const double disc_res = norm2(project_disc(dtheta + step * dgrad) - dtheta) / step;
  report.conditions.push_back({"discriminator projected stationarity", disc_res,
                               tol - disc_res, tol, disc_res <= tol, ""});

  auto phi_gen = [&](const Vector& th) { return value(game, gs.unpack(th), d); };
  std::vector<Vector> gen_dirs;
  for (std::size_t k = 0; k < gtheta.size(); ++k) gen_dirs.push_back(axis(gtheta.size(), k));
  const CurvatureRange gen_curv =
      feasible_curvature(phi_gen, project_gen, gtheta, ggrad, gen_dirs, tol);
  report.conditions.push_back({"generator curvature eigmin", gen_curv.eig_min,
                               gen_curv.eig_min + tol2, tol2, gen_curv.eig_min >= -tol2,
                               "feasible-direction Hessian of the value at fixed d"});

  auto phi_disc = [&](const Vector& th) { return value(game, g, ds.unpack(th)); };
  const CurvatureRange disc_curv =
      feasible_curvature(phi_disc, project_disc, dtheta, dgrad, disc_directions(ds), tol);
  report.conditions.push_back({"discriminator curvature eigmax", disc_curv.eig_max,
                               tol2 - disc_curv.eig_max, tol2, disc_curv.eig_max <= tol2,
                               "feasible-direction Hessian of the value at fixed g"});

  finish_verdict(report);
  return report;
}

EquilibriumReport certify_no_nash_w2(double sigma, const std::vector<LinearGenerator>& grid,
                                     double tol) {
  if (!(sigma > 1.0))
    throw std::invalid_argument("certify_no_nash_w2: needs sigma > 1");
  if (grid.empty()) throw std::invalid_argument("certify_no_nash_w2: empty grid");

  EquilibriumReport report;
  report.claim = "no_nash_w2_grid";
  report.note = kGridScopeNote;
  report.conditions.resize(grid.size());
  report.points.resize(grid.size());

  parallel_for(grid.size(), [&](std::size_t i) {
    const LinearGenerator& g = grid[i];
    report.points[i] = describe(g);
    const std::string name = "point " + std::to_string(i) + ": mean-Hessian eigenvalue";
    const auto [smin, smax] = singular_range(g.w);
    if (smin < 1e-12) {
      report.conditions[i] = skipped(name, "rank-deficient W");
      return;
    }
    if (smax > 1.0 + 1e-9) {
      report.conditions[i] = skipped(name, "spectral cap exceeded");
      return;
    }
    const Game game = Game::w2_lq(sigma, g.data_dim(), g.latent_dim(), 1.0);
    const Discriminator br = best_response_disc(game, g);
    const std::size_t off = g.w.rows() * g.w.cols();
    const GenSpace gsp{g};
    const Vector theta = gsp.pack(g);
    auto phi = [&](const Vector& th) { return value(game, gsp.unpack(th), br); };
    std::vector<Vector> u_dirs;
    for (std::size_t k = 0; k < g.u.size(); ++k)
      u_dirs.push_back(axis(theta.size(), off + k));
    const double h = 1e-4 * (1.0 + norm2(theta));
    const SymEig eig = sym_eig(fd_hessian(phi, theta, u_dirs, h));
    const double eig_min = eig.values[0];
    const double bound = -(sigma - 1.0) + tol;
    report.conditions[i] = {name, eig_min, bound - eig_min, tol, eig_min <= bound, ""};
  });
  finish_verdict(report);
  return report;
}

EquilibriumReport certify_no_nash_fgan(const FDivergenceSpec& family, double sigma,
                                       const std::vector<LinearGenerator>& grid,
                                       double tol) {
  family.validate();
  if (!family.scaled_curvature_nondecreasing)
    throw std::invalid_argument(
        "certify_no_nash_fgan: family is not flagged for the curvature certificate "
        "(t^2 f'' must be non-decreasing)");
  if (!(sigma > 1.0))
    throw std::invalid_argument("certify_no_nash_fgan: needs sigma > 1");
  if (grid.empty()) throw std::invalid_argument("certify_no_nash_fgan: empty grid");

  EquilibriumReport report;
  report.claim = "no_nash_fgan_grid";
  report.note = kGridScopeNote;
  report.conditions.resize(grid.size());
  report.points.resize(grid.size());

  parallel_for(grid.size(), [&](std::size_t i) {
    const LinearGenerator& g = grid[i];
    report.points[i] = describe(g);
    const std::string name =
        "point " + std::to_string(i) + ": conjugate-composed response convexity";
    const auto [smin, smax] = singular_range(g.w);
    if (smin < 1e-12) {
      report.conditions[i] = skipped(name, "rank-deficient W");
      return;
    }
    if (smax > 1.0 + 1e-9) {
      report.conditions[i] = skipped(name, "spectral cap exceeded");
      return;
    }
    const Game game = Game::fgan_gauss(sigma, g.data_dim(), g.latent_dim(), family);
    const auto br = std::get<LogRatioDiscriminator>(best_response_disc(game, g));
    auto psi = [&](const Vector& x) { return family.f_conj(br.eval(x)); };
    const std::size_t dim = g.data_dim();
    // Axis lattice of radius sigma around the origin.
    std::vector<Vector> probes;
    probes.push_back(Vector(dim));
    for (std::size_t k = 0; k < dim; ++k)
      for (double c : {-1.0, -0.5, 0.5, 1.0}) probes.push_back((c * sigma) * axis(dim, k));
    double worst = std::numeric_limits<double>::infinity();
    std::vector<Vector> x_dirs;
    for (std::size_t k = 0; k < dim; ++k) x_dirs.push_back(axis(dim, k));
    for (const Vector& x : probes) {
      const double h = 1e-4 * (1.0 + norm2(x));
      const SymEig eig = sym_eig(fd_hessian(psi, x, x_dirs, h));
      worst = std::min(worst, eig.values[0]);
    }
    report.conditions[i] = {name, worst, worst - tol, tol, worst >= tol, ""};
  });
  finish_verdict(report);
  return report;
}

EquilibriumReport certify_no_nash_wgan1d(double sigma,
                                         const std::vector<LinearGenerator>& grid,
                                         double tol) {
  if (!(sigma > 1.0))
    throw std::invalid_argument("certify_no_nash_wgan1d: needs sigma > 1");
  if (grid.empty()) throw std::invalid_argument("certify_no_nash_wgan1d: empty grid");

  EquilibriumReport report;
  report.claim = "no_nash_wgan1d_grid";
  report.note = kGridScopeNote;
  report.conditions.resize(2 * grid.size());
  report.points.resize(grid.size());

  parallel_for(grid.size(), [&](std::size_t i) {
    const LinearGenerator& g = grid[i];
    report.points[i] = describe(g);
    const std::string tag = "point " + std::to_string(i);
    if (g.data_dim() != 1 || g.latent_dim() != 1)
      throw std::invalid_argument("certify_no_nash_wgan1d: grid must be 1-D");
    if (std::abs(g.w(0, 0)) > 1.0 + 1e-9) {
      report.conditions[2 * i] = skipped(tag + ": response convexity", "|w| above the cap");
      report.conditions[2 * i + 1] = skipped(tag + ": response non-constant", "|w| above the cap");
      return;
    }
    const Game game = Game::wgan_1d(sigma);
    const auto br = std::get<PiecewiseLinearDiscriminator>(best_response_disc(game, g));
    std::vector<double> slopes;
    slopes.push_back(br.left_slope);
    for (double s : br.segment_slopes()) slopes.push_back(s);
    slopes.push_back(br.right_slope);
    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < slopes.size(); ++k)
      min_step = std::min(min_step, slopes[k + 1] - slopes[k]);
    const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
    const double range = *hi - *lo;
    report.conditions[2 * i] = {tag + ": response convexity", min_step, min_step + tol, tol,
                                min_step >= -tol, "minimum consecutive slope increment"};
    report.conditions[2 * i + 1] = {tag + ": response non-constant", range, range - tol, tol,
                                    range > tol, "slope range"};
  });
  finish_verdict(report);
  return report;
}

EquilibriumReport check_proximal_equilibrium(
    const Game& game, const LinearGenerator& g_star, const Discriminator& d_star,
    double lambda, const SobolevMetric& m, const std::vector<LinearGenerator>& gen_grid,
    const std::vector<Discriminator>& disc_grid, double tol) {
  game.validate();
  if (!(lambda >= 0.0))
    throw std::invalid_argument("check_proximal_equilibrium: lambda must be nonnegative");
  if (!g_star.feasible(1e-9))
    throw std::invalid_argument("check_proximal_equilibrium: infeasible g_star");
  for (const LinearGenerator& g : gen_grid)
    if (!g.feasible(1e-9))
      throw std::invalid_argument("check_proximal_equilibrium: infeasible gen_grid entry");

  EquilibriumReport report;
  report.claim = "proximal_equilibrium";
  report.note = kGridScopeNote;
  report.points.push_back(describe(g_star));
  report.points.push_back(describe(d_star));

  const double v_star = value(game, g_star, d_star);
  std::vector<ConditionResult> disc_conds(disc_grid.size());
  parallel_for(disc_grid.size(), [&](std::size_t i) {
    const double gap = value(game, g_star, disc_grid[i]) - v_star;
    disc_conds[i] = {"disc point " + std::to_string(i) + ": V(g*, d) - V(g*, d*)", gap,
                     tol - gap, tol, gap <= tol, ""};
  });

  ProximalConfig cfg;
  cfg.lambda = lambda > 0.0 ? lambda : 1.0;
  cfg.inner_max_iters = 4000;
  cfg.inner_tol = 1e-8;
  std::vector<ConditionResult> gen_conds(gen_grid.size());
  parallel_for(gen_grid.size(), [&](std::size_t j) {
    // lambda = 0 removes the penalty, so the right side is the plain inner
    // maximum, available exactly as the best-response value.
    const double rhs =
        lambda == 0.0
            ? value(game, gen_grid[j], best_response_disc(game, gen_grid[j]))
            : prox_value(game, gen_grid[j], d_star, m, cfg).value;
    const double slack = rhs - v_star;
    gen_conds[j] = {"gen point " + std::to_string(j) + ": penalized sup minus V(g*, d*)",
                    slack, slack + tol, tol, slack >= -tol, ""};
  });

  for (auto& c : disc_conds) report.conditions.push_back(std::move(c));
  for (auto& c : gen_conds) report.conditions.push_back(std::move(c));
  finish_verdict(report);
  return report;
}

EquilibriumReport pe_hierarchy_check(
    const Game& game, double lambda1, double lambda2,
    const std::vector<std::pair<LinearGenerator, Discriminator>>& candidates,
    const SobolevMetric& m, const std::vector<LinearGenerator>& gen_grid,
    const std::vector<Discriminator>& disc_grid, double tol) {
  if (!(lambda1 <= lambda2))
    throw std::invalid_argument("pe_hierarchy_check: needs lambda1 <= lambda2");

  EquilibriumReport report;
  report.claim = "pe_hierarchy";
  report.note = kGridScopeNote;

  auto min_margin = [](const EquilibriumReport& r) {
    double m_min = std::numeric_limits<double>::infinity();
    for (const ConditionResult& c : r.conditions) m_min = std::min(m_min, c.margin);
    return m_min;
  };

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& [g, d] = candidates[k];
    report.points.push_back(describe(g) + " with " + describe(d));
    const std::string tag = "candidate " + std::to_string(k);
    const EquilibriumReport at2 = check_proximal_equilibrium(game, g, d, lambda2, m,
                                                             gen_grid, disc_grid, tol);
    if (!at2.passed()) {
      ConditionResult c;
      c.name = tag + ": containment vacuous";
      c.measured = min_margin(at2);
      c.margin = 0.0;
      c.tolerance = tol;
      c.pass = true;
      c.note = "fails the lambda2 membership check, so the hierarchy imposes nothing";
      report.conditions.push_back(std::move(c));
      continue;
    }
    const EquilibriumReport at1 = check_proximal_equilibrium(game, g, d, lambda1, m,
                                                             gen_grid, disc_grid, tol);
    const double margin1 = min_margin(at1);
    report.conditions.push_back({tag + ": lambda2 member stays a lambda1 member", margin1,
                                 margin1, tol, at1.passed(),
                                 "worst condition margin of the lambda1 check"});
  }
  finish_verdict(report);
  return report;
}

EquilibriumReport verify_thm2_inequality(double sigma, double eta,
                                         const std::vector<LinearGenerator>& theta_grid,
                                         double tol) {
  if (!(sigma > 1.0))
    throw std::invalid_argument("verify_thm2_inequality: needs sigma > 1");
  if (!(eta > 0.0)) throw std::invalid_argument("verify_thm2_inequality: needs eta > 0");
  if (theta_grid.empty())
    throw std::invalid_argument("verify_thm2_inequality: empty grid");

  const std::size_t dim = theta_grid.front().data_dim();
  for (const LinearGenerator& g : theta_grid) {
    if (g.data_dim() != dim || g.latent_dim() != dim)
      throw std::invalid_argument("verify_thm2_inequality: grid dimensions must match");
    if (!is_symmetric(g.w, 1e-9) || sym_eig(symmetrize(g.w)).values[0] < -1e-9)
      throw std::invalid_argument(
          "verify_thm2_inequality: grid W must be symmetric PSD so the best-response "
          "family is convex");
    const auto [smin, smax] = singular_range(g.w);
    (void)smin;
    if (smax > 1.0 + 1e-9)
      throw std::invalid_argument("verify_thm2_inequality: grid W exceeds the spectral cap");
  }

  const Game game = Game::w2_lq(sigma, dim, dim, eta);
  const SpectralConstraint cap{SpectralBound::kMaxSingularValueAtMost, 1.0};
  const LinearGenerator g_star(Matrix::identity(dim), Vector(dim), cap);
  const auto d_star = std::get<QuadraticDiscriminator>(best_response_disc(game, g_star));
  const double lhs = value(game, g_star, Discriminator(d_star));

  EquilibriumReport report;
  report.claim = "thm2_inequality";
  report.note = kGridScopeNote;
  report.conditions.resize(theta_grid.size());
  report.points.resize(theta_grid.size());

  parallel_for(theta_grid.size(), [&](std::size_t i) {
    const LinearGenerator& g = theta_grid[i];
    report.points[i] = describe(g);
    const auto d_theta = std::get<QuadraticDiscriminator>(best_response_disc(game, g));
    const double v_theta = value(game, g, Discriminator(d_theta));
    const QuadraticDiscriminator diff(d_theta.a - d_star.a, d_theta.b - d_star.b, 0.0);
    const double dist_sq = closed_form_semi_norm_sq_quadratic(game.data, diff);
    const double slack = v_theta - dist_sq / (2.0 * eta) - lhs;
    report.conditions[i] = {"point " + std::to_string(i) +
                                ": value gap dominates scaled response distance",
                            slack, slack + tol, tol, slack >= -tol, ""};
  });
  finish_verdict(report);
  return report;
}

std::vector<double> thm3_transport_samples(double sigma, std::size_t n) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("thm3_transport_samples: needs sigma > 0");
  if (n == 0) throw std::invalid_argument("thm3_transport_samples: needs n > 0");
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = sigma * normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  return xs;
}

EquilibriumReport verify_thm3_inequality(double sigma,
                                         const std::vector<LinearGenerator>& theta_grid,
                                         double tol) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("verify_thm3_inequality: needs 0 < sigma < 1");
  if (theta_grid.empty())
    throw std::invalid_argument("verify_thm3_inequality: empty grid");
  for (const LinearGenerator& g : theta_grid) {
    if (g.data_dim() != 1 || g.latent_dim() != 1)
      throw std::invalid_argument("verify_thm3_inequality: grid must be 1-D");
    if (g.w(0, 0) < 1.0 - 1e-12)
      throw std::invalid_argument("verify_thm3_inequality: grid needs w >= 1");
  }

  EquilibriumReport report;
  report.claim = "thm3_inequality";
  report.note = kGridScopeNote;

  // The monotone map from the data law onto the generator law is linear
  // between Gaussians, x -> u + (w / sigma) x, so the transport magnitude at
  // a sample is |x (1 - w / sigma) - u|.
  const std::vector<double> xs = thm3_transport_samples(sigma);
  double min_alpha = std::numeric_limits<double>::infinity();
  for (const LinearGenerator& g : theta_grid) {
    const double w = g.w(0, 0), u = g.u[0];
    for (double x : xs)
      min_alpha = std::min(min_alpha, std::abs(x * (1.0 - w / sigma) - u));
  }
  const double eta = 2.0 * min_alpha;
  ConditionResult eta_cond;
  eta_cond.name = "empirical transport lower bound";
  eta_cond.measured = eta;
  eta_cond.margin = min_alpha - 1e-8;
  eta_cond.tolerance = 1e-8;
  eta_cond.pass = min_alpha >= 1e-8;
  eta_cond.note = "2 min over grid points and samples of the transport magnitude";
  const bool informative = eta_cond.pass;
  report.conditions.push_back(std::move(eta_cond));
  if (!informative) {
    report.verdict = "uninformative";
    report.note = "transport magnitude below 1e-8 at a sample; the bound is vacuous";
    for (const LinearGenerator& g : theta_grid) report.points.push_back(describe(g));
    return report;
  }

  const Game game = Game::wgan_1d(sigma);
  const SpectralConstraint floor{SpectralBound::kMinSingularValueAtLeast, 1.0};
  const LinearGenerator g_star(Matrix{{1.0}}, Vector(1), floor);
  const auto d_star = std::get<PiecewiseLinearDiscriminator>(best_response_disc(game, g_star));
  const double v_star = value(game, g_star, Discriminator(d_star));

  std::vector<ConditionResult> conds(theta_grid.size());
  std::vector<std::string> points(theta_grid.size());
  parallel_for(theta_grid.size(), [&](std::size_t i) {
    const LinearGenerator& g = theta_grid[i];
    points[i] = describe(g);
    const auto d_theta = std::get<PiecewiseLinearDiscriminator>(best_response_disc(game, g));
    const double gap = value(game, g, Discriminator(d_theta)) - v_star;
    const double rhs = 0.5 * eta * grad_diff_sq_mean(sigma, d_theta, d_star);
    const double slack = gap - rhs;
    conds[i] = {"point " + std::to_string(i) +
                    ": value gap dominates scaled response distance",
                slack, slack + tol, tol, slack >= -tol, ""};
  });
  for (auto& p : points) report.points.push_back(std::move(p));
  for (auto& c : conds) report.conditions.push_back(std::move(c));
  finish_verdict(report);
  return report;
}

}  // namespace proxeq

#include "proxeq/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace proxeq {

void FDivergenceSpec::validate() const {
  if (!f || !f_prime || !f_double_prime || !f_conj || !f_conj_of_f_prime)
    throw std::invalid_argument("FDivergenceSpec '" + name + "': missing function entries");
  if (std::abs(f(1.0)) > 1e-12)
    throw std::invalid_argument("FDivergenceSpec '" + name + "': f(1) = " +
                                std::to_string(f(1.0)) + ", expected 0");
  double prev_scaled = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * std::pow(100.0, i / 100.0);  // log-spaced over [0.1, 10]
    const double lhs = f_conj(f_prime(t));
    const double rhs = t * f_prime(t) - f(t);
    if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
      throw std::invalid_argument("FDivergenceSpec '" + name +
                                  "': conjugate identity fails at t = " +
                                  std::to_string(t));
    if (std::abs(f_conj_of_f_prime(t) - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
      throw std::invalid_argument("FDivergenceSpec '" + name +
                                  "': f_conj_of_f_prime table wrong at t = " +
                                  std::to_string(t));
    if (scaled_curvature_nondecreasing) {
      const double scaled = t * t * f_double_prime(t);
      if (scaled < prev_scaled - 1e-12)
        throw std::invalid_argument("FDivergenceSpec '" + name +
                                    "': t^2 f''(t) decreases at t = " +
                                    std::to_string(t));
      prev_scaled = scaled;
    }
  }
}

FDivergenceSpec fdiv_jsd() {
  FDivergenceSpec s;
  s.name = "jsd";
  s.f = [](double t) { return t * std::log(t) - (t + 1.0) * std::log(0.5 * (t + 1.0)); };
  s.f_prime = [](double t) { return std::log(2.0 * t / (t + 1.0)); };
  s.f_double_prime = [](double t) { return 1.0 / (t * (t + 1.0)); };
  s.f_conj = [](double u) {
    const double log2 = std::log(2.0);
    if (u > log2) return std::numeric_limits<double>::infinity();
    // (2 - e^u)/2 via expm1: the direct difference cancels catastrophically
    // as u approaches log 2.
    const double gap = -std::expm1(u - log2);
    // u values produced by f' land exactly on log 2 once t exceeds ~1/ulp;
    // the conjugate one ulp below the boundary caps what rounding can encode.
    if (gap <= 0.0) return 52.0 * log2;
    return -std::log(2.0 * gap);
  };
  s.f_conj_of_f_prime = [](double t) { return std::log(0.5 * (t + 1.0)); };
  s.scaled_curvature_nondecreasing = true;  // t^2 f'' = t/(t+1)
  return s;
}

FDivergenceSpec fdiv_kl() {
  FDivergenceSpec s;
  s.name = "kl";
  s.f = [](double t) { return t * std::log(t); };
  s.f_prime = [](double t) { return std::log(t) + 1.0; };
  s.f_double_prime = [](double t) { return 1.0 / t; };
  s.f_conj = [](double u) { return std::exp(u - 1.0); };
  s.f_conj_of_f_prime = [](double t) { return t; };
  s.scaled_curvature_nondecreasing = true;  // t^2 f'' = t
  return s;
}

FDivergenceSpec fdiv_pearson_chi2() {
  FDivergenceSpec s;
  s.name = "pearson_chi2";
  s.f = [](double t) { return (t - 1.0) * (t - 1.0); };
  s.f_prime = [](double t) { return 2.0 * (t - 1.0); };
  s.f_double_prime = [](double) { return 2.0; };
  s.f_conj = [](double u) {
    // sup over t > 0 lands on the stationary point only for u >= -2;
    // below that the supremum is approached at t -> 0 with value -f(0) = -1.
    return u >= -2.0 ? u + 0.25 * u * u : -1.0;
  };
  s.f_conj_of_f_prime = [](double t) { return t * t - 1.0; };
  s.scaled_curvature_nondecreasing = true;  // t^2 f'' = 2 t^2
  return s;
}

FDivergenceSpec fdiv_by_name(const std::string& name) {
  if (name == "jsd") return fdiv_jsd();
  if (name == "kl") return fdiv_kl();
  if (name == "pearson_chi2") return fdiv_pearson_chi2();
  throw std::invalid_argument("unknown f-divergence family '" + name + "'");
}

QuadraticDiscriminator::QuadraticDiscriminator(Matrix a_in, Vector b_in, double c_in)
    : a(std::move(a_in)), b(std::move(b_in)), c(c_in) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("QuadraticDiscriminator: shape mismatch");
  if (!is_symmetric(a, 1e-12))
    throw std::invalid_argument("QuadraticDiscriminator: A not symmetric within 1e-12");
  a = symmetrize(a);
  if (!a.all_finite() || !b.all_finite() || !std::isfinite(c))
    throw std::invalid_argument("QuadraticDiscriminator: non-finite entries");
}

double QuadraticDiscriminator::eval(const Vector& x) const {
  return dot(x, matvec(a, x)) + dot(b, x) + c;
}

Vector QuadraticDiscriminator::grad(const Vector& x) const {
  return 2.0 * matvec(a, x) + b;
}

PiecewiseLinearDiscriminator::PiecewiseLinearDiscriminator(
    std::vector<double> knots_in, std::vector<double> values_in,
    double left_slope_in, double right_slope_in)
    : knots(std::move(knots_in)),
      values(std::move(values_in)),
      left_slope(left_slope_in),
      right_slope(right_slope_in) {
  if (knots.empty() || knots.size() != values.size())
    throw std::invalid_argument("PiecewiseLinearDiscriminator: need equally many knots and values");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i] < knots[i + 1]))
      throw std::invalid_argument("PiecewiseLinearDiscriminator: knots must be strictly increasing");
  for (double k : knots)
    if (!std::isfinite(k))
      throw std::invalid_argument("PiecewiseLinearDiscriminator: non-finite knot");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("PiecewiseLinearDiscriminator: non-finite value");
  if (!std::isfinite(left_slope) || !std::isfinite(right_slope))
    throw std::invalid_argument("PiecewiseLinearDiscriminator: non-finite tail slope");
}

double PiecewiseLinearDiscriminator::eval(double x) const {
  if (x <= knots.front()) return values.front() + left_slope * (x - knots.front());
  if (x >= knots.back()) return values.back() + right_slope * (x - knots.back());
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
  const double t = (x - knots[i]) / (knots[i + 1] - knots[i]);
  return values[i] + t * (values[i + 1] - values[i]);
}

double PiecewiseLinearDiscriminator::deriv(double x, bool* at_kink) const {
  if (at_kink) *at_kink = false;
  if (x < knots.front()) return left_slope;
  if (x > knots.back()) return right_slope;
  const auto it = std::lower_bound(knots.begin(), knots.end(), x);
  const bool on_knot = it != knots.end() && *it == x;
  if (on_knot && at_kink) *at_kink = true;
  if (x == knots.back()) return right_slope;
  const auto up = std::upper_bound(knots.begin(), knots.end(), x);
  const std::size_t i = static_cast<std::size_t>(up - knots.begin()) - 1;
  return (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
}

std::vector<double> PiecewiseLinearDiscriminator::segment_slopes() const {
  std::vector<double> s;
  s.reserve(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    s.push_back((values[i + 1] - values[i]) / (knots[i + 1] - knots[i]));
  return s;
}

double PiecewiseLinearDiscriminator::max_abs_slope() const {
  double m = std::max(std::abs(left_slope), std::abs(right_slope));
  for (double s : segment_slopes()) m = std::max(m, std::abs(s));
  return m;
}

LogRatioDiscriminator::LogRatioDiscriminator(Matrix p_in, Vector q_in, double r_in,
                                             FDivergenceSpec family_in)
    : p(std::move(p_in)), q(std::move(q_in)), r(r_in), family(std::move(family_in)) {
  if (p.rows() != p.cols() || p.rows() != q.size())
    throw std::invalid_argument("LogRatioDiscriminator: shape mismatch");
  if (!is_symmetric(p, 1e-12))
    throw std::invalid_argument("LogRatioDiscriminator: P not symmetric within 1e-12");
  p = symmetrize(p);
  family.validate();
}

double LogRatioDiscriminator::log_ratio(const Vector& x) const {
  return 0.5 * dot(x, matvec(p, x)) + dot(q, x) + r;
}

double LogRatioDiscriminator::eval(const Vector& x) const {
  const double s = log_ratio(x);
  const double t = std::exp(s);
  if (!std::isfinite(t))
    throw std::domain_error("LogRatioDiscriminator: exp(log-ratio) overflows at log-ratio " +
                            std::to_string(s));
  return family.f_prime(t);
}

Vector LogRatioDiscriminator::grad(const Vector& x) const {
  const double s = log_ratio(x);
  const double t = std::exp(s);
  if (!std::isfinite(t))
    throw std::domain_error("LogRatioDiscriminator: exp(log-ratio) overflows at log-ratio " +
                            std::to_string(s));
  const double scale = family.f_double_prime(t) * t;
  return scale * (matvec(p, x) + q);
}

EvalResult eval_and_grad(const Discriminator& d, const Vector& x) {
  EvalResult out;
  if (const auto* quad = std::get_if<QuadraticDiscriminator>(&d)) {
    out.value = quad->eval(x);
    out.grad = quad->grad(x);
    return out;
  }
  if (const auto* pl = std::get_if<PiecewiseLinearDiscriminator>(&d)) {
    if (x.size() != 1)
      throw std::invalid_argument("piecewise-linear discriminators are one-dimensional");
    out.value = pl->eval(x[0]);
    out.grad = Vector{pl->deriv(x[0], &out.at_kink)};
    return out;
  }
  const auto& lr = std::get<LogRatioDiscriminator>(d);
  out.value = lr.eval(x);
  out.grad = lr.grad(x);
  return out;
}

PiecewiseLinearDiscriminator project_lipschitz(const PiecewiseLinearDiscriminator& d,
                                               double lipschitz_bound) {
  if (!(lipschitz_bound > 0.0))
    throw std::invalid_argument("project_lipschitz: bound must be positive");
  const double L = lipschitz_bound;
  auto clip = [L](double s) { return std::clamp(s, -L, L); };
  std::vector<double> values(d.values.size());
  values[0] = d.values[0];
  for (std::size_t i = 0; i + 1 < d.knots.size(); ++i) {
    const double slope = clip((d.values[i + 1] - d.values[i]) / (d.knots[i + 1] - d.knots[i]));
    values[i + 1] = values[i] + slope * (d.knots[i + 1] - d.knots[i]);
  }
  return PiecewiseLinearDiscriminator(d.knots, std::move(values),
                                      clip(d.left_slope), clip(d.right_slope));
}

namespace {

double c_concave_cap(double eta, CConcaveConvention convention) {
  return convention == CConcaveConvention::kHessianBound ? 0.5 * eta : eta;
}

}  // namespace

QuadraticDiscriminator project_c_concave(const QuadraticDiscriminator& d, double eta,
                                          CConcaveConvention convention) {
  if (!(eta > 0.0)) throw std::invalid_argument("project_c_concave: eta must be positive");
  const double cap = c_concave_cap(eta, convention) - kCConcaveMargin;
  const SymEig eig = sym_eig(d.a);
  if (eig.values[eig.values.size() - 1] <= cap) return d;
  Vector clipped = eig.values;
  for (std::size_t i = 0; i < clipped.size(); ++i) clipped[i] = std::min(clipped[i], cap);
  Matrix a = symmetrize(
      matmul(matmul(eig.vectors, Matrix::diag(clipped)), transpose(eig.vectors)));
  return QuadraticDiscriminator(std::move(a), d.b, d.c);
}

bool is_c_concave(const QuadraticDiscriminator& d, double eta, double margin,
                  CConcaveConvention convention) {
  if (!(eta > 0.0)) throw std::invalid_argument("is_c_concave: eta must be positive");
  const SymEig eig = sym_eig(d.a);
  return eig.values[eig.values.size() - 1] <= c_concave_cap(eta, convention) - margin;
}

}  // namespace proxeq

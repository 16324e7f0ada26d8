#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "proxeq/linalg.hpp"

namespace proxeq {

// f-divergence generator as an explicit function table. Supplying f' , f''
// and the conjugate by hand (instead of differentiating) keeps every oracle
// closed-form; validate() guards transcription errors via the conjugate
// identity f*(f'(t)) = t f'(t) - f(t).
struct FDivergenceSpec {
  std::string name;
  std::function<double(double)> f;               // convex on t > 0, f(1) = 0
  std::function<double(double)> f_prime;
  std::function<double(double)> f_double_prime;
  std::function<double(double)> f_conj;          // Fenchel conjugate, +inf outside its domain
  std::function<double(double)> f_conj_of_f_prime;  // t -> t f'(t) - f(t)
  // True when t^2 f''(t) is non-decreasing on (0, inf); the no-equilibrium
  // curvature certificate requires it.
  bool scaled_curvature_nondecreasing = false;

  // Checks f(1) = 0 within 1e-12, the conjugate identity within 1e-9 on
  // t in [0.1, 10], and (when flagged) monotonicity of t^2 f''(t) there.
  void validate() const;
};

FDivergenceSpec fdiv_jsd();
FDivergenceSpec fdiv_kl();
FDivergenceSpec fdiv_pearson_chi2();
// Lookup by name ("jsd" | "kl" | "pearson_chi2"); throws std::invalid_argument
// for anything else.
FDivergenceSpec fdiv_by_name(const std::string& name);

// D(x) = x^T A x + b^T x + c with A symmetric. The constant term is not part
// of the trained parameterization (it never affects gradients in x) but
// c-transforms of quadratics produce one, so values carry it.
struct QuadraticDiscriminator {
  Matrix a;
  Vector b;
  double c = 0.0;

  QuadraticDiscriminator(Matrix a_in, Vector b_in, double c_in = 0.0);

  std::size_t dim() const { return b.size(); }
  double eval(const Vector& x) const;
  Vector grad(const Vector& x) const;  // 2 A x + b
};

// Continuous 1-D piecewise-linear function: linear between consecutive knots,
// extended left/right with the tail slopes.
struct PiecewiseLinearDiscriminator {
  std::vector<double> knots;   // strictly increasing
  std::vector<double> values;  // same length as knots
  double left_slope = 0.0;
  double right_slope = 0.0;

  PiecewiseLinearDiscriminator(std::vector<double> knots_in,
                               std::vector<double> values_in,
                               double left_slope_in, double right_slope_in);

  double eval(double x) const;
  // Derivative, taking the right-hand slope at a knot; *at_kink reports when
  // that choice was exercised.
  double deriv(double x, bool* at_kink = nullptr) const;
  // Slopes between consecutive knots (size knots.size() - 1).
  std::vector<double> segment_slopes() const;
  double max_abs_slope() const;
};

// D(x) = f'(exp(s(x))) with s(x) = (1/2) x^T P x + q^T x + r. For Gaussian
// density ratios s is exactly the log-ratio, so this family contains the
// pointwise-optimal discriminator of every f-divergence game here.
struct LogRatioDiscriminator {
  Matrix p;  // symmetric
  Vector q;
  double r = 0.0;
  FDivergenceSpec family;

  LogRatioDiscriminator(Matrix p_in, Vector q_in, double r_in, FDivergenceSpec family_in);

  std::size_t dim() const { return q.size(); }
  double log_ratio(const Vector& x) const;  // s(x)
  double eval(const Vector& x) const;
  Vector grad(const Vector& x) const;  // f''(e^s) e^s (P x + q)
};

using Discriminator = std::variant<QuadraticDiscriminator,
                                   PiecewiseLinearDiscriminator,
                                   LogRatioDiscriminator>;

struct EvalResult {
  double value = 0.0;
  Vector grad;
  bool at_kink = false;
};

// Value and x-gradient for any family; piecewise-linear functions take x as a
// 1-vector and report kink hits through the flag.
EvalResult eval_and_grad(const Discriminator& d, const Vector& x);

// Clips every slope (tails included) to [-L, L] and re-accumulates values
// left to right, keeping the leftmost knot value fixed.
PiecewiseLinearDiscriminator project_lipschitz(const PiecewiseLinearDiscriminator& d,
                                               double lipschitz_bound);

enum class CConcaveConvention {
  // (eta/2) I - A positive semidefinite: the Hessian condition that actually
  // makes x -> (eta/2)|x|^2 - D(x) convex.
  kHessianBound,
  // eta I - A positive semidefinite: the looser set kept for comparison runs.
  kLooseBound,
};

// Clips eigenvalues of A so the chosen c-concavity set holds strictly (with a
// small interior margin) for cost (eta/2)|x - x'|^2; b and c pass through.
QuadraticDiscriminator project_c_concave(
    const QuadraticDiscriminator& d, double eta,
    CConcaveConvention convention = CConcaveConvention::kHessianBound);

// Strict feasibility margin after projections: eigenvalues sit at least this
// far inside the bound so downstream c-transforms stay well posed.
inline constexpr double kCConcaveMargin = 1e-8;

bool is_c_concave(const QuadraticDiscriminator& d, double eta,
                  double margin = 0.0,
                  CConcaveConvention convention = CConcaveConvention::kHessianBound);

}  // namespace proxeq

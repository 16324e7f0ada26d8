#pragma once

#include <functional>
#include <string>
#include <vector>

namespace proxeq {

enum class QuadratureRule { kTrapezoid, kGaussLegendre };

struct QuadratureSpec {
  double lo = -10.0;
  double hi = 10.0;
  int n_points = 256;
  QuadratureRule rule = QuadratureRule::kGaussLegendre;

  // Throws std::invalid_argument unless lo < hi, both finite, n_points >= 16.
  void validate() const;
};

struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights on [lo, hi] for the requested rule.
QuadratureGrid make_grid(const QuadratureSpec& spec);

double integrate(const QuadratureSpec& spec,
                 const std::function<double(double)>& f);

// Sums in a balanced binary tree, which keeps rounding error near
// O(log n) instead of O(n) for long sample averages.
double pairwise_sum(const std::vector<double>& xs);

// One-dimensional Gaussian helpers used by closed-form expectations.
double gaussian_pdf(double x, double mean, double var);
double gaussian_cdf(double x, double mean, double var);

// E[X ; X <= t] partial first moment of N(mean, var), i.e.
// integral of x * pdf(x) over (-inf, t].
double gaussian_partial_mean(double t, double mean, double var);

}  // namespace proxeq

#include "proxeq/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace proxeq {

void QuadratureSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("quadrature window must be finite");
  if (!(lo < hi))
    throw std::invalid_argument("quadrature window is empty: lo >= hi");
  if (n_points < 16)
    throw std::invalid_argument("quadrature needs at least 16 points, got " +
                                std::to_string(n_points));
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
// Cached per n; the per-run node sets are tiny.
void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace

QuadratureGrid make_grid(const QuadratureSpec& spec) {
  spec.validate();
  QuadratureGrid g;
  const int n = spec.n_points;
  if (spec.rule == QuadratureRule::kTrapezoid) {
    g.nodes.resize(n);
    g.weights.resize(n);
    const double h = (spec.hi - spec.lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      g.nodes[i] = spec.lo + h * i;
      g.weights[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
  } else {
    static std::mutex cache_mutex;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::pair<std::vector<double>, std::vector<double>> unit;
    {
      std::lock_guard<std::mutex> lock(cache_mutex);
      auto it = cache.find(n);
      if (it == cache.end()) {
        gauss_legendre_unit(n, unit.first, unit.second);
        it = cache.emplace(n, unit).first;
      } else {
        unit = it->second;
      }
    }
    g.nodes.resize(n);
    g.weights.resize(n);
    const double half = 0.5 * (spec.hi - spec.lo);
    const double mid = 0.5 * (spec.hi + spec.lo);
    for (int i = 0; i < n; ++i) {
      g.nodes[i] = mid + half * unit.first[i];
      g.weights[i] = half * unit.second[i];
    }
  }
  return g;
}

double integrate(const QuadratureSpec& spec,
                 const std::function<double(double)>& f) {
  const QuadratureGrid g = make_grid(spec);
  std::vector<double> terms(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    terms[i] = g.weights[i] * f(g.nodes[i]);
  return pairwise_sum(terms);
}

double pairwise_sum(const std::vector<double>& xs) {
  // Recursion bottoms out on short runs summed directly.
  std::function<double(std::size_t, std::size_t)> go =
      [&](std::size_t lo, std::size_t hi) -> double {
    if (hi - lo <= 8) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += xs[i];
      return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return go(lo, mid) + go(mid, hi);
  };
  return xs.empty() ? 0.0 : go(0, xs.size());
}

double gaussian_pdf(double x, double mean, double var) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * 3.14159265358979323846 * var);
}

double gaussian_cdf(double x, double mean, double var) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * var));
}

double gaussian_partial_mean(double t, double mean, double var) {
  // d/dx pdf = -(x-mean)/var * pdf, so integral of x*pdf over (-inf, t]
  // is mean*CDF(t) - var*pdf(t).
  return mean * gaussian_cdf(t, mean, var) - var * gaussian_pdf(t, mean, var);
}

}  // namespace proxeq

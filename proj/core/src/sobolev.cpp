#include "proxeq/sobolev.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "proxeq/parallel.hpp"
#include "proxeq/quadrature.hpp"

namespace proxeq {

SampleSet::SampleSet(std::vector<Vector> pts, SampleSource src)
    : points(std::move(pts)), source(src) {
  if (points.empty()) throw std::invalid_argument("SampleSet: needs at least one point");
  const std::size_t d = points.front().size();
  for (const Vector& p : points) {
    if (p.size() != d)
      throw std::invalid_argument("SampleSet: points have mixed dimensions");
    for (std::size_t i = 0; i < d; ++i)
      if (!std::isfinite(p[i]))
        throw std::invalid_argument("SampleSet: non-finite sample point");
  }
}

SampleSet sample_set_from_gaussian(const Gaussian& data, std::size_t n, Rng& rng) {
  const Matrix root = matrix_sqrt_psd(data.cov);
  std::vector<Vector> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back(data.mean + matvec(root, rng.normal_vector(data.dim())));
  return SampleSet(std::move(pts), SampleSource::kDrawnFromData);
}

SampleSet sample_set_grid_1d(double lo, double hi, std::size_t n) {
  if (!(lo < hi)) throw std::invalid_argument("sample_set_grid_1d: lo must be below hi");
  if (n < 2) throw std::invalid_argument("sample_set_grid_1d: needs at least two points");
  std::vector<Vector> pts;
  pts.reserve(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(Vector{lo + h * static_cast<double>(i)});
  return SampleSet(std::move(pts), SampleSource::kGrid);
}

double semi_inner(const SobolevMetric& m, const Discriminator& d1, const Discriminator& d2,
                  std::size_t* kink_count) {
  const std::size_t n = m.samples.size();
  std::vector<double> terms(n);
  std::atomic<std::size_t> kinks{0};
  parallel_for(n, [&](std::size_t i) {
    const EvalResult r1 = eval_and_grad(d1, m.samples.points[i]);
    const EvalResult r2 = eval_and_grad(d2, m.samples.points[i]);
    if (r1.at_kink || r2.at_kink) kinks.fetch_add(1, std::memory_order_relaxed);
    terms[i] = dot(r1.grad, r2.grad);
  });
  if (kink_count) *kink_count = kinks.load();
  return pairwise_sum(terms) / static_cast<double>(n);
}

double semi_norm_sq(const SobolevMetric& m, const Discriminator& d,
                    std::size_t* kink_count) {
  return semi_inner(m, d, d, kink_count);
}

double closed_form_semi_norm_sq_quadratic(const Gaussian& data,
                                          const QuadraticDiscriminator& d) {
  if (data.dim() != d.b.size())
    throw std::invalid_argument("closed_form_semi_norm_sq_quadratic: dimension mismatch");
  const Matrix asa = matmul(matmul(d.a, data.cov), d.a);
  const Vector center = 2.0 * matvec(d.a, data.mean) + d.b;
  return 4.0 * trace(asa) + dot(center, center);
}

}  // namespace proxeq

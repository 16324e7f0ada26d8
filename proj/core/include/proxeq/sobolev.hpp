#pragma once

#include <cstddef>
#include <vector>

#include "proxeq/discriminator.hpp"
#include "proxeq/gaussian.hpp"
#include "proxeq/rng.hpp"

namespace proxeq {

enum class SampleSource { kDrawnFromData, kGrid };

// A frozen set of evaluation points. The proximal machinery averages gradient
// norms over these, so the set is fixed once at experiment start to keep the
// objective deterministic across iterations.
struct SampleSet {
  std::vector<Vector> points;
  SampleSource source = SampleSource::kDrawnFromData;

  SampleSet(std::vector<Vector> pts, SampleSource src);

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.front().size(); }
};

SampleSet sample_set_from_gaussian(const Gaussian& data, std::size_t n, Rng& rng);
SampleSet sample_set_grid_1d(double lo, double hi, std::size_t n);

// Gradient-averaged metric over the sample set: the squared norm is
// (1/n) sum_i ||grad d(x_i)||^2, a semi-norm whose null space is the constants.
struct SobolevMetric {
  SampleSet samples;

  explicit SobolevMetric(SampleSet s) : samples(std::move(s)) {}
};

// (1/n) sum_i grad_d1(x_i)^T grad_d2(x_i). A kink landing exactly on a sample
// point uses the right-hand slope; `kink_count`, when given, receives how many
// sample points that happened at.
double semi_inner(const SobolevMetric& m, const Discriminator& d1, const Discriminator& d2,
                  std::size_t* kink_count = nullptr);

double semi_norm_sq(const SobolevMetric& m, const Discriminator& d,
                    std::size_t* kink_count = nullptr);

// E||2AX + b||^2 = 4 tr(A Sigma A) + ||2 A mu + b||^2 for X ~ data, exact.
double closed_form_semi_norm_sq_quadratic(const Gaussian& data,
                                          const QuadraticDiscriminator& d);

}  // namespace proxeq

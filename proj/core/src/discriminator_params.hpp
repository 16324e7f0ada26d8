#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <variant>

#include "proxeq/discriminator.hpp"
#include "proxeq/games.hpp"
#include "proxeq/linalg.hpp"

namespace proxeq::detail {

// Discriminator ascent and the inner proximal solve both work over a flat
// parameter vector. Each class maps its trained parameters in and out;
// constants live in the gradient semi-norm's null space, so they stay
// anchored at the reference function (the quadratic keeps c, the
// piecewise-linear function keeps its leftmost value and optimizes slopes).
// For plain game ascent the anchored coordinates are exactly the value-null
// ones, so the same packing serves both uses.
struct ParamSpace {
  const Game& game;
  const Discriminator& warm;

  std::size_t size() const {
    if (const auto* q = std::get_if<QuadraticDiscriminator>(&warm)) {
      const std::size_t d = q->dim();
      return d * d + d;
    }
    if (const auto* l = std::get_if<LogRatioDiscriminator>(&warm)) {
      const std::size_t d = l->dim();
      return d * d + d + 1;
    }
    const auto& p = std::get<PiecewiseLinearDiscriminator>(warm);
    return p.knots.size() + 1;  // left tail, interior segments, right tail
  }

  Vector pack(const Discriminator& d) const {
    Vector theta(size());
    std::size_t at = 0;
    if (const auto* q = std::get_if<QuadraticDiscriminator>(&d)) {
      for (std::size_t i = 0; i < q->dim(); ++i)
        for (std::size_t j = 0; j < q->dim(); ++j) theta[at++] = q->a(i, j);
      for (std::size_t i = 0; i < q->dim(); ++i) theta[at++] = q->b[i];
      return theta;
    }
    if (const auto* l = std::get_if<LogRatioDiscriminator>(&d)) {
      for (std::size_t i = 0; i < l->dim(); ++i)
        for (std::size_t j = 0; j < l->dim(); ++j) theta[at++] = l->p(i, j);
      for (std::size_t i = 0; i < l->dim(); ++i) theta[at++] = l->q[i];
      theta[at] = l->r;
      return theta;
    }
    const auto& p = std::get<PiecewiseLinearDiscriminator>(d);
    theta[at++] = p.left_slope;
    for (double s : p.segment_slopes()) theta[at++] = s;
    theta[at] = p.right_slope;
    return theta;
  }

  Discriminator unpack(const Vector& theta) const {
    std::size_t at = 0;
    if (const auto* q = std::get_if<QuadraticDiscriminator>(&warm)) {
      const std::size_t d = q->dim();
      Matrix a(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) = theta[at++];
      Vector b(d);
      for (std::size_t i = 0; i < d; ++i) b[i] = theta[at++];
      return QuadraticDiscriminator(std::move(a), std::move(b), q->c);
    }
    if (const auto* l = std::get_if<LogRatioDiscriminator>(&warm)) {
      const std::size_t d = l->dim();
      Matrix p(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p(i, j) = theta[at++];
      Vector q(d);
      for (std::size_t i = 0; i < d; ++i) q[i] = theta[at++];
      return LogRatioDiscriminator(std::move(p), std::move(q), theta[at], l->family);
    }
    const auto& p = std::get<PiecewiseLinearDiscriminator>(warm);
    std::vector<double> values(p.knots.size());
    values[0] = p.values[0];
    for (std::size_t i = 0; i + 1 < p.knots.size(); ++i)
      values[i + 1] = values[i] + (p.knots[i + 1] - p.knots[i]) * theta[1 + i];
    return PiecewiseLinearDiscriminator(p.knots, std::move(values), theta[0],
                                        theta[theta.size() - 1]);
  }

  Vector project(const Vector& theta) const {
    if (std::holds_alternative<QuadraticDiscriminator>(warm)) {
      const Discriminator d = unpack(theta);
      return pack(
          project_c_concave(std::get<QuadraticDiscriminator>(d), game.eta));
    }
    if (std::holds_alternative<LogRatioDiscriminator>(warm)) return theta;
    Vector out = theta;
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::clamp(out[i], -1.0, 1.0);
    return out;
  }

  // Game-value gradient in packed coordinates. The quadratic's constant and
  // the piecewise-linear anchor are not coordinates, so their components are
  // either dropped (c has zero gradient in the transport game) or chained
  // through the cumulative-sum map from knot values to slopes.
  Vector value_grad(const LinearGenerator& g, const Discriminator& d) const {
    const DiscriminatorGradient dg = grad_discriminator(game, g, d);
    Vector out(size());
    std::size_t at = 0;
    if (std::holds_alternative<QuadraticDiscriminator>(warm) ||
        std::holds_alternative<LogRatioDiscriminator>(warm)) {
      for (std::size_t i = 0; i < dg.a.rows(); ++i)
        for (std::size_t j = 0; j < dg.a.cols(); ++j) out[at++] = dg.a(i, j);
      for (std::size_t i = 0; i < dg.b.size(); ++i) out[at++] = dg.b[i];
      if (std::holds_alternative<LogRatioDiscriminator>(warm)) out[at] = dg.c;
      return out;
    }
    const auto& p = std::get<PiecewiseLinearDiscriminator>(warm);
    out[0] = dg.left_slope;
    double suffix = 0.0;
    Vector seg(p.knots.size() - 1);
    for (std::size_t j = p.knots.size() - 1; j-- > 0;) {
      suffix += dg.b[j + 1];
      seg[j] = (p.knots[j + 1] - p.knots[j]) * suffix;
    }
    for (std::size_t j = 0; j < seg.size(); ++j) out[1 + j] = seg[j];
    out[out.size() - 1] = dg.right_slope;
    return out;
  }
};

}  // namespace proxeq::detail

#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "molrbf/errors.hpp"

namespace molrbf {

/// Finite-difference weights for the derivative of the given order at x0 from
/// samples at `points` (Fornberg's recursion).
template <std::floating_point Real = double>
std::vector<Real> fd_weights(Real x0, std::span<const Real> points, int order) {
  const std::size_t n = points.size();
  if (order < 0 || n <= static_cast<std::size_t>(order))
    throw InvalidArgument("stencil too small for requested derivative order");
  const auto m = static_cast<std::size_t>(order);
  // c[j][k]: weight of point j for derivative k.
  std::vector<std::vector<Real>> c(n, std::vector<Real>(m + 1, Real(0)));
  Real c1 = 1;
  Real c4 = points[0] - x0;
  c[0][0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    Real c2 = 1;
    const Real c5 = c4;
    c4 = points[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const Real c3 = points[i] - points[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[i][k] = c1 * (static_cast<Real>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - static_cast<Real>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<Real> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

/// Central difference of `f` at x with spacing h using 2*half_width+1 points.
template <std::floating_point Real, class F>
Real central_difference(F&& f, Real x, Real h, int order, int half_width) {
  std::vector<Real> offsets;
  for (int j = -half_width; j <= half_width; ++j) offsets.push_back(static_cast<Real>(j));
  const auto w = fd_weights<Real>(Real(0), offsets, order);
  Real sum = 0;
  for (std::size_t j = 0; j < offsets.size(); ++j)
    if (w[j] != Real(0)) sum += w[j] * f(x + offsets[j] * h);
  Real scale = 1;
  for (int k = 0; k < order; ++k) scale *= h;
  return sum / scale;
}

} // namespace molrbf

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "molrbf/errors.hpp"
#include "molrbf/kernels.hpp"

namespace molrbf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Five spatial derivatives need at least six collocation nodes.
inline constexpr std::size_t kMinNodes = 6;

/// Condition numbers above this are accepted but flagged.
inline constexpr double kConditionWarning = 1e18;

/// Strictly increasing 1D collocation nodes. The first and last node are the
/// domain endpoints.
class NodeSet {
public:
  explicit NodeSet(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < kMinNodes)
      throw InvalidArgument("node set needs at least 6 nodes, got " +
                            std::to_string(points_.size()));
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!std::isfinite(points_[i])) throw InvalidArgument("node coordinates must be finite");
      if (i > 0 && !(points_[i] > points_[i - 1]))
        throw InvalidArgument("nodes must be strictly increasing");
    }
  }

  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> points() const noexcept { return points_; }
  double x_min() const noexcept { return points_.front(); }
  double x_max() const noexcept { return points_.back(); }

  /// Spacing h when built by build_uniform_nodes.
  std::optional<double> spacing() const noexcept { return spacing_; }

  friend NodeSet build_uniform_nodes(double x_min, double x_max, std::size_t n);

private:
  std::vector<double> points_;
  std::optional<double> spacing_;
};

inline NodeSet build_uniform_nodes(double x_min, double x_max, std::size_t n) {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw InvalidArgument("uniform nodes need x_min < x_max");
  if (n < kMinNodes)
    throw InvalidArgument("uniform nodes need n >= 6, got " + std::to_string(n));
  const double h = (x_max - x_min) / static_cast<double>(n - 1);
  std::vector<double> x(n);
  for (std::size_t i = 0; i + 1 < n; ++i) x[i] = x_min + static_cast<double>(i) * h;
  x.back() = x_max;
  NodeSet nodes(std::move(x));
  nodes.spacing_ = h;
  return nodes;
}

/// Largest distance from a point of [front, back] to its nearest node, for
/// sorted nodes. In 1D this is half the widest gap.
inline double fill_distance(std::span<const double> sorted) {
  double widest = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    widest = std::max(widest, sorted[i] - sorted[i - 1]);
  return 0.5 * widest;
}

inline double fill_distance(const NodeSet& nodes) {
  if (auto h = nodes.spacing()) return 0.5 * *h;
  return fill_distance(nodes.points());
}

/// 2-norm condition number sigma_max / sigma_min from the full singular
/// spectrum. Returns +infinity when sigma_min is exactly zero.
inline double condition_number(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("condition number needs a square matrix");
  if (a.rows() == 0) throw InvalidArgument("condition number of an empty matrix");
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

/// Partial-pivot LU of a square matrix. Throws SingularMatrixError naming the
/// first exactly zero pivot.
inline Eigen::PartialPivLU<Matrix> factorize(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("factorize needs a square matrix");
  Eigen::PartialPivLU<Matrix> lu(a);
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (diag(i) == 0.0 || !std::isfinite(diag(i)))
      throw SingularMatrixError(static_cast<std::size_t>(i));
  return lu;
}

/// (B_d)_ij = d-th derivative of the kernel centred at x_j, evaluated at x_i.
inline Matrix collocation_matrix(const NodeSet& nodes, const KernelSpec& spec, int order) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Matrix b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      b(i, j) = kernel_derivative(spec, nodes[static_cast<std::size_t>(i)],
                                  nodes[static_cast<std::size_t>(j)], order);
  return b;
}

/// Interpolation matrix, its factorization and the differentiation matrices
/// M_d = B_d A^-1 for d = 1..5. Immutable once assembled.
class Operators {
public:
  const NodeSet& nodes() const noexcept { return nodes_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  const Matrix& interpolation() const noexcept { return a_; }
  const Eigen::PartialPivLU<Matrix>& factorization() const noexcept { return lu_; }

  const Matrix& derivative(int order) const {
    if (order < 1 || order > kMaxDerivativeOrder)
      throw InvalidArgument("differentiation matrix order must be in 1..5");
    return m_[static_cast<std::size_t>(order - 1)];
  }

  double condition() const noexcept { return condition_; }
  double fill_distance() const noexcept { return fill_distance_; }
  bool ill_conditioned() const noexcept { return condition_ > kConditionWarning; }

  /// Expansion coefficients lambda with A lambda = u.
  Vector coefficients(const Vector& u) const {
    check_length(u);
    return lu_.solve(u);
  }

  /// Derivative of the interpolant V(x) u at an arbitrary point.
  double evaluate(const Vector& u, double x, int order = 0) const {
    const Vector lambda = coefficients(u);
    double sum = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
      sum += lambda(static_cast<Eigen::Index>(j)) * kernel_derivative(kernel_, x, nodes_[j], order);
    return sum;
  }

  friend Operators assemble(const NodeSet& nodes, const KernelSpec& spec);

private:
  Operators(NodeSet nodes, KernelSpec kernel) : nodes_(std::move(nodes)), kernel_(kernel) {}

  void check_length(const Vector& u) const {
    if (static_cast<std::size_t>(u.size()) != size())
      throw InvalidArgument("vector length does not match node count");
  }

  NodeSet nodes_;
  KernelSpec kernel_;
  Matrix a_;
  Eigen::PartialPivLU<Matrix> lu_;
  std::array<Matrix, kMaxDerivativeOrder> m_;
  double condition_ = 0.0;
  double fill_distance_ = 0.0;
};

inline Operators assemble(const NodeSet& nodes, const KernelSpec& spec) {
  Operators ops(nodes, spec);
  const auto n = static_cast<Eigen::Index>(nodes.size());
  ops.a_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      ops.a_(i, j) = kernel_value(
          spec, std::abs(nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)]));

  ops.lu_ = factorize(ops.a_);
  // M A = B  <=>  A^T M^T = B^T, solved with the same factorization.
  for (int d = 1; d <= kMaxDerivativeOrder; ++d) {
    const Matrix bt = collocation_matrix(nodes, spec, d).transpose();
    const Matrix mt = ops.lu_.transpose().solve(bt);
    ops.m_[static_cast<std::size_t>(d - 1)] = mt.transpose();
  }
  ops.condition_ = condition_number(ops.a_);
  ops.fill_distance_ = fill_distance(nodes);
  return ops;
}

} // namespace molrbf

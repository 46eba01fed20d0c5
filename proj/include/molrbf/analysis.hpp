#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "molrbf/discretization.hpp"
#include "molrbf/errors.hpp"
#include "molrbf/gfkdv.hpp"
#include "molrbf/integrator.hpp"
#include "molrbf/solutions.hpp"

namespace molrbf {

struct ErrorReport {
  double max_error = 0.0;
  double l2_error = 0.0;
  double rms_error = 0.0;
  std::size_t n = 0;
  double h = 0.0;
};

/// max |d|, sqrt(h sum d^2) and sqrt(sum d^2 / N) for d = numeric - exact.
inline ErrorReport error_norms(const Vector& numeric, const Vector& exact, double h) {
  if (numeric.size() != exact.size()) throw InvalidArgument("error_norms: length mismatch");
  if (!(h > 0.0)) throw InvalidArgument("error_norms: h must be positive");
  if (numeric.size() == 0) throw InvalidArgument("error_norms: empty vectors");
  const Eigen::ArrayXd d = (numeric - exact).array();
  const double sum_sq = d.square().sum();
  ErrorReport r;
  r.n = static_cast<std::size_t>(d.size());
  r.h = h;
  r.max_error = d.abs().maxCoeff();
  r.l2_error = std::sqrt(h * sum_sq);
  r.rms_error = std::sqrt(sum_sq / static_cast<double>(d.size()));
  return r;
}

/// Trapezoidal rule for samples f at the nodes.
inline double trapezoid(const Vector& f, const NodeSet& nodes) {
  if (static_cast<std::size_t>(f.size()) != nodes.size())
    throw InvalidArgument("trapezoid: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto a = static_cast<Eigen::Index>(i - 1);
    const auto b = static_cast<Eigen::Index>(i);
    sum += 0.5 * (nodes[i] - nodes[i - 1]) * (f(a) + f(b));
  }
  return sum;
}

/// I1 = integral of u.
inline double conserved_i1(const Vector& u, const NodeSet& nodes) { return trapezoid(u, nodes); }

/// I2 = integral of u^3/3 - w u_x^2 with w = 1 (SK) or 1/6 (Lax); u_x = M1 u.
inline double conserved_i2(const Vector& u, const NodeSet& nodes, const Operators& ops, Preset variant) {
  if (static_cast<std::size_t>(u.size()) != nodes.size() || ops.size() != nodes.size())
    throw InvalidArgument("conserved_i2: length mismatch");
  const Vector ux = ops.derivative(1) * u;
  const double w = variant == Preset::Sk ? 1.0 : 1.0 / 6.0;
  const Vector integrand = (u.array().cube() / 3.0 - w * ux.array().square()).matrix();
  return trapezoid(integrand, nodes);
}

/// Hardy: c = 0.815 times the mean nearest-neighbour distance.
inline double hardy_shape(std::span<const double> sorted) {
  if (sorted.size() < 2) throw InvalidArgument("hardy_shape needs at least two nodes");
  double total = 0.0;
  const std::size_t n = sorted.size();
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::numeric_limits<double>::infinity();
    if (i > 0) d = std::min(d, sorted[i] - sorted[i - 1]);
    if (i + 1 < n) d = std::min(d, sorted[i + 1] - sorted[i]);
    total += d;
  }
  return 0.815 * total / static_cast<double>(n);
}

inline double hardy_shape(const NodeSet& nodes) { return hardy_shape(nodes.points()); }

/// Franke: c = 1.25 D / sqrt(N), D the diameter of the node cloud.
inline double franke_shape(std::span<const double> sorted) {
  if (sorted.empty()) throw InvalidArgument("franke_shape needs at least one node");
  const auto [lo, hi] = std::minmax_element(sorted.begin(), sorted.end());
  return 1.25 * (*hi - *lo) / std::sqrt(static_cast<double>(sorted.size()));
}

inline double franke_shape(const NodeSet& nodes) { return franke_shape(nodes.points()); }

struct SweepRow {
  double shape = 0.0;
  double max_error = 0.0;
  double l2_error = 0.0;
  double rms_error = 0.0;
  double condition = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<double> selected;
};

struct SweepOptions {
  double condition_cap = 1e18;
  // 0 selects std::thread::hardware_concurrency().
  unsigned jobs = 1;
};

/// Solve, compare with the exact solution at t_end and record conditioning
/// for one shape. Factorization or time-marching failures give a row of
/// infinities rather than an exception.
inline SweepRow sweep_candidate(const GfKdvProblem& problem, const NodeSet& grid, Family family,
                                double shape, double dt, double t_end) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  SweepRow row{shape, inf, inf, inf, inf};
  std::optional<Operators> ops;
  try {
    ops.emplace(assemble(grid, KernelSpec(family, shape)));
  } catch (const SingularMatrixError&) {
    return row;
  }
  row.condition = ops->condition();
  try {
    const Vector u0 = sample_initial(problem, grid);
    const Trajectory tr = integrate(problem, *ops, u0, 0.0, t_end, dt, std::numeric_limits<std::size_t>::max());
    Vector exact(u0.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      exact(static_cast<Eigen::Index>(i)) = problem.exact(grid[i], t_end);
    const double h = (grid.x_max() - grid.x_min()) / static_cast<double>(grid.size() - 1);
    const ErrorReport e = error_norms(tr.final_state(), exact, h);
    row.max_error = e.max_error;
    row.l2_error = e.l2_error;
    row.rms_error = e.rms_error;
  } catch (const BlowUpError&) {
  }
  return row;
}

/// Row index minimising max_error among finite rows with condition <= cap;
/// ties go to the smaller shape.
inline std::optional<std::size_t> select_shape(std::span<const SweepRow> rows, double condition_cap) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!std::isfinite(r.max_error) || !(r.condition <= condition_cap)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = rows[*best];
    if (r.max_error < b.max_error || (r.max_error == b.max_error && r.shape < b.shape)) best = i;
  }
  return best;
}

/// Brute-force shape selection: one solve per candidate, rows kept in input
/// order regardless of how many workers run.
inline SweepResult sweep_shape(const GfKdvProblem& problem, const NodeSet& grid, Family family,
                               std::span<const double> shapes, double dt, double t_end,
                               const SweepOptions& options = {}) {
  if (shapes.empty()) throw InvalidArgument("shape sweep needs at least one candidate");
  for (double c : shapes)
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("sweep shapes must be positive");
  if (!problem.has_exact()) throw InvalidArgument("shape sweep needs an exact solution");
  step_count(0.0, t_end, dt);

  SweepResult result;
  result.rows.resize(shapes.size());
  unsigned jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, shapes.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < shapes.size(); i = next++)
      result.rows[i] = sweep_candidate(problem, grid, family, shapes[i], dt, t_end);
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  if (auto idx = select_shape(result.rows, options.condition_cap)) result.selected = result.rows[*idx].shape;
  return result;
}

/// count shapes geometrically spaced from lo to hi inclusive.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw InvalidArgument("invalid log-spaced range");
  if (count == 1) return {lo};
  if (!(hi > lo)) throw InvalidArgument("invalid log-spaced range");
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

} // namespace molrbf

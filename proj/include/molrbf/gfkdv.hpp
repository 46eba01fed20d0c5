#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>

#include "molrbf/discretization.hpp"
#include "molrbf/errors.hpp"
#include "molrbf/solutions.hpp"

namespace molrbf {

/// A gfKdV initial-boundary value problem on [x_min, x_max] with Dirichlet
/// data at both ends.
struct GfKdvProblem {
  GfKdvCoefficients coefficients;
  double x_min = 0.0;
  double x_max = 1.0;
  std::function<double(double)> initial;
  std::function<double(double)> left_bc;
  std::function<double(double)> right_bc;
  // Time derivatives of the boundary data; empty means constant data.
  std::function<double(double)> left_bc_rate;
  std::function<double(double)> right_bc_rate;
  std::function<double(double, double)> exact;

  std::optional<Preset> preset;
  std::optional<SolitonParams> soliton;

  bool has_exact() const { return static_cast<bool>(exact); }
};

/// Checks domain ordering and that the boundary data matches the initial
/// profile at t0 to 1e-12 relative.
inline void validate(const GfKdvProblem& p, double t0 = 0.0) {
  if (!(p.x_min < p.x_max)) throw InvalidArgument("problem domain needs x_min < x_max");
  if (!p.initial || !p.left_bc || !p.right_bc)
    throw InvalidArgument("problem needs initial and boundary data");
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
  };
  if (!close(p.initial(p.x_min), p.left_bc(t0)) || !close(p.initial(p.x_max), p.right_bc(t0)))
    throw InvalidArgument("boundary data inconsistent with initial condition");
}

/// Lax or Sawada-Kotera soliton problem. Boundary data is the exact solution
/// traced at the endpoints.
inline GfKdvProblem preset(Preset which, double k, double x0, std::pair<double, double> domain) {
  const SolitonParams sp(k, x0);
  GfKdvProblem p;
  p.coefficients = preset_coefficients(which);
  p.x_min = domain.first;
  p.x_max = domain.second;
  p.preset = which;
  p.soliton = sp;
  p.exact = [which, sp](double x, double t) { return exact_solution(which, x, t, sp); };
  p.initial = [which, sp](double x) { return exact_solution(which, x, 0.0, sp); };
  const double a = domain.first;
  const double b = domain.second;
  p.left_bc = [which, sp, a](double t) { return exact_solution(which, a, t, sp); };
  p.right_bc = [which, sp, b](double t) { return exact_solution(which, b, t, sp); };
  p.left_bc_rate = [which, sp, a](double t) { return exact_solution_dt(which, a, t, sp); };
  p.right_bc_rate = [which, sp, b](double t) { return exact_solution_dt(which, b, t, sp); };
  validate(p);
  return p;
}

inline GfKdvProblem preset(std::string_view name, double k, double x0, std::pair<double, double> domain) {
  return preset(parse_preset(name), k, x0, domain);
}

/// Initial state vector sampled at the nodes.
inline Vector sample_initial(const GfKdvProblem& p, const NodeSet& nodes) {
  Vector u(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) u(static_cast<Eigen::Index>(i)) = p.initial(nodes[i]);
  return u;
}

/// Semi-discrete right-hand side H(U):
///   -alpha U^2 (M1 U) - beta (M1 U)(M2 U) - gamma U (M3 U) - delta5 (M5 U)
/// on interior nodes; the two boundary rows carry the rates of the Dirichlet
/// data.
inline Vector rhs(const Vector& u, const Operators& ops, const GfKdvCoefficients& co, double t,
                  const GfKdvProblem& problem) {
  const auto n = u.size();
  if (static_cast<std::size_t>(n) != ops.size())
    throw InvalidArgument("state length does not match operator size");
  const Vector d1 = ops.derivative(1) * u;
  const Vector d2 = ops.derivative(2) * u;
  const Vector d3 = ops.derivative(3) * u;
  const Vector d5 = ops.derivative(5) * u;
  Vector h = -co.alpha * u.array().square() * d1.array() - co.beta * d1.array() * d2.array() -
             co.gamma * u.array() * d3.array() - co.delta5 * d5.array();
  h(0) = problem.left_bc_rate ? problem.left_bc_rate(t) : 0.0;
  h(n - 1) = problem.right_bc_rate ? problem.right_bc_rate(t) : 0.0;
  return h;
}

inline Vector rhs(const Vector& u, const Operators& ops, double t, const GfKdvProblem& problem) {
  return rhs(u, ops, problem.coefficients, t, problem);
}

/// Clamp the end values to the Dirichlet data at time t.
inline Vector apply_dirichlet(Vector u, double t, const GfKdvProblem& problem) {
  if (u.size() == 0) return u;
  u(0) = problem.left_bc(t);
  u(u.size() - 1) = problem.right_bc(t);
  return u;
}

} // namespace molrbf

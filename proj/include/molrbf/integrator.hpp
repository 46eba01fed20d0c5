#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "molrbf/discretization.hpp"
#include "molrbf/errors.hpp"
#include "molrbf/gfkdv.hpp"

namespace molrbf {

namespace detail {

inline bool all_finite(double v) { return std::isfinite(v); }

template <class Derived>
bool all_finite(const Eigen::DenseBase<Derived>& v) {
  return v.allFinite();
}

} // namespace detail

/// One classical RK4 step. `f(u, t)` is called exactly four times.
/// Throws BlowUpError(step, t + dt) if the result is not finite.
template <class State, class Rhs>
State rk4_step(Rhs&& f, const State& u, double t, double dt, std::size_t step = 0) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const double half = 0.5 * dt;
  const State k1 = f(u, t);
  const State k2 = f(State(u + half * k1), t + half);
  const State k3 = f(State(u + half * k2), t + half);
  const State k4 = f(State(u + dt * k3), t + dt);
  State next = u + dt * State((k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0);
  if (!detail::all_finite(next)) throw BlowUpError(step, t + dt);
  return next;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  double dt = 0.0;

  // run metadata
  Family family = Family::Ga;
  double shape = 0.0;
  std::size_t n = 0;
  std::string preset;

  const Vector& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
};

/// Number of dt steps covering [t0, t_end]; rejects spans that are not a
/// whole number of steps (within 1e-9).
inline std::size_t step_count(double t0, double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (t_end < t0) throw InvalidArgument("t_end must not precede t0");
  const double ratio = (t_end - t0) / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9)
    throw InvalidArgument("(t_end - t0) / dt is not an integer number of steps");
  return static_cast<std::size_t>(rounded);
}

/// March U0 from t0 to t_end with RK4, re-imposing the Dirichlet data after
/// each step. Records U0, every `snapshot_every`-th state and the final state.
inline Trajectory integrate(const GfKdvProblem& problem, const Operators& ops, const Vector& u0,
                            double t0, double t_end, double dt, std::size_t snapshot_every = 1) {
  if (snapshot_every == 0) throw InvalidArgument("snapshot_every must be at least 1");
  if (static_cast<std::size_t>(u0.size()) != ops.size())
    throw InvalidArgument("initial state length does not match operator size");
  const std::size_t steps = step_count(t0, t_end, dt);

  Trajectory tr;
  tr.dt = dt;
  tr.family = ops.kernel().family();
  tr.shape = ops.kernel().shape();
  tr.n = ops.size();
  if (problem.preset) tr.preset = std::string(to_string(*problem.preset));
  tr.times.push_back(t0);
  tr.states.push_back(u0);

  auto f = [&](const Vector& u, double t) { return rhs(u, ops, t, problem); };
  Vector u = u0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t = t0 + static_cast<double>(i - 1) * dt;
    const double t_next = i == steps ? t_end : t0 + static_cast<double>(i) * dt;
    u = apply_dirichlet(rk4_step(f, u, t, dt, i), t_next, problem);
    if (i % snapshot_every == 0 || i == steps) {
      tr.times.push_back(t_next);
      tr.states.push_back(u);
    }
  }
  return tr;
}

} // namespace molrbf

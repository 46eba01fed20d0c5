#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "molrbf/errors.hpp"
#include "molrbf/finite_difference.hpp"

namespace molrbf {

/// The two gfKdV specializations with closed-form solitons.
enum class Preset { Lax, Sk };

inline std::string_view to_string(Preset p) { return p == Preset::Lax ? "lax" : "sk"; }

inline Preset parse_preset(std::string_view name) {
  if (name == "lax" || name == "Lax" || name == "LAX") return Preset::Lax;
  if (name == "sk" || name == "SK" || name == "Sk") return Preset::Sk;
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

/// Wave number k (nonzero) and initial crest position x0.
class SolitonParams {
public:
  SolitonParams(double k, double x0) : k_(k), x0_(x0) {
    if (k == 0.0 || !std::isfinite(k)) throw InvalidArgument("wave number k must be nonzero and finite");
    if (!std::isfinite(x0)) throw InvalidArgument("x0 must be finite");
  }
  double k() const noexcept { return k_; }
  double x0() const noexcept { return x0_; }

private:
  double k_;
  double x0_;
};

namespace detail {

// 1/cosh without overflow in the tails.
template <class Real>
Real sech(Real z) {
  const Real ch = std::cosh(z);
  return std::isfinite(ch) ? Real(1) / ch : Real(0);
}

} // namespace detail

inline double lax_speed(const SolitonParams& p) { return 56.0 * std::pow(p.k(), 4); }
inline double sk_speed(const SolitonParams& p) { return 16.0 * std::pow(p.k(), 4); }

namespace detail {

template <class Real>
Real pow4(Real k) {
  return k * k * k * k;
}

} // namespace detail

/// 2k^2 (2 - 3 tanh^2(k(x - 56k^4 t - x0)))
template <std::floating_point Real = double>
Real lax_exact(Real x, Real t, const SolitonParams& p) {
  const Real k = p.k();
  const Real th = std::tanh(k * (x - 56 * detail::pow4(k) * t - Real(p.x0())));
  return 2 * k * k * (2 - 3 * th * th);
}

/// 2k^2 sech^2(k(x - 16k^4 t - x0))
template <std::floating_point Real = double>
Real sk_exact(Real x, Real t, const SolitonParams& p) {
  const Real k = p.k();
  const Real se = detail::sech(k * (x - 16 * detail::pow4(k) * t - Real(p.x0())));
  return 2 * k * k * se * se;
}

/// Time derivative of lax_exact.
inline double lax_exact_dt(double x, double t, const SolitonParams& p) {
  const double k = p.k();
  const double z = k * (x - lax_speed(p) * t - p.x0());
  const double se = detail::sech(z);
  return 12.0 * k * k * k * lax_speed(p) * std::tanh(z) * se * se;
}

/// Time derivative of sk_exact.
inline double sk_exact_dt(double x, double t, const SolitonParams& p) {
  const double k = p.k();
  const double z = k * (x - sk_speed(p) * t - p.x0());
  const double se = detail::sech(z);
  return 4.0 * k * k * k * sk_speed(p) * std::tanh(z) * se * se;
}

template <std::floating_point Real = double>
Real exact_solution(Preset which, Real x, Real t, const SolitonParams& p) {
  return which == Preset::Lax ? lax_exact(x, t, p) : sk_exact(x, t, p);
}

inline double exact_solution_dt(Preset which, double x, double t, const SolitonParams& p) {
  return which == Preset::Lax ? lax_exact_dt(x, t, p) : sk_exact_dt(x, t, p);
}

/// gfKdV coefficients: u_t + alpha u^2 u_x + beta u_x u_xx + gamma u u_xxx + delta5 u_xxxxx = 0.
struct GfKdvCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta5 = 0.0;

  friend bool operator==(const GfKdvCoefficients&, const GfKdvCoefficients&) = default;
};

inline GfKdvCoefficients preset_coefficients(Preset which) {
  if (which == Preset::Lax) return {30.0, 30.0, 10.0, 1.0};
  return {45.0, 15.0, 15.0, 1.0};
}

/// Max |PDE residual| of u(x, t) at the sample points, every derivative taken
/// by 13-point central differences in extended precision. `u` must accept
/// long double arguments. Steps scale with the soliton width 1/|k| and the
/// matching time scale.
template <class F>
double pde_residual(const GfKdvCoefficients& co, F&& u, double k, double speed,
                    std::span<const std::pair<double, double>> points) {
  using Real = long double;
  const Real hx = Real(0.04) / std::abs(Real(k));
  const Real ht = speed != 0.0 ? hx / std::abs(Real(speed)) : hx;
  constexpr int half = 6;
  double worst = 0.0;
  for (const auto& [x, t] : points) {
    auto in_x = [&](Real xx) { return Real(u(xx, Real(t))); };
    auto in_t = [&](Real tt) { return Real(u(Real(x), tt)); };
    const Real v = u(Real(x), Real(t));
    const Real ut = central_difference<Real>(in_t, t, ht, 1, half);
    const Real ux = central_difference<Real>(in_x, x, hx, 1, half);
    const Real uxx = central_difference<Real>(in_x, x, hx, 2, half);
    const Real uxxx = central_difference<Real>(in_x, x, hx, 3, half);
    const Real u5 = central_difference<Real>(in_x, x, hx, 5, half);
    const Real r = ut + co.alpha * v * v * ux + co.beta * ux * uxx + co.gamma * v * uxxx + co.delta5 * u5;
    worst = std::max(worst, static_cast<double>(std::abs(r)));
  }
  return worst;
}

inline double pde_residual(Preset which, const SolitonParams& p,
                           std::span<const std::pair<double, double>> points) {
  auto u = [&](long double x, long double t) { return exact_solution(which, x, t, p); };
  const double speed = which == Preset::Lax ? lax_speed(p) : sk_speed(p);
  return pde_residual(preset_coefficients(which), u, p.k(), speed, points);
}

} // namespace molrbf

#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

#include "molrbf/errors.hpp"

namespace molrbf {

enum class Family { Mq, Imq, Ga };

inline std::string_view to_string(Family f) {
  switch (f) {
  case Family::Mq: return "mq";
  case Family::Imq: return "imq";
  case Family::Ga: return "ga";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  if (name == "mq" || name == "MQ") return Family::Mq;
  if (name == "imq" || name == "IMQ") return Family::Imq;
  if (name == "ga" || name == "GA") return Family::Ga;
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'");
}

/// Kernel family together with its shape parameter c.
///
///   MQ   phi(r) = (c^2 + r^2)^(1/2)
///   IMQ  phi(r) = (c^2 + r^2)^(-1/2)
///   GA   phi(r) = exp(-c r^2)
///
/// Note that c multiplies r^2 in the Gaussian; it is not a length scale there.
class KernelSpec {
public:
  KernelSpec(Family family, double shape) : family_(family), shape_(shape) {
    if (!(shape > 0.0) || !std::isfinite(shape))
      throw InvalidArgument("shape parameter must be positive and finite");
  }

  Family family() const noexcept { return family_; }
  double shape() const noexcept { return shape_; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

private:
  Family family_;
  double shape_;
};

inline constexpr int kMaxDerivativeOrder = 5;

template <std::floating_point Real = double>
Real kernel_value(const KernelSpec& spec, Real r) {
  using std::exp;
  using std::sqrt;
  const Real c = static_cast<Real>(spec.shape());
  switch (spec.family()) {
  case Family::Mq: return sqrt(c * c + r * r);
  case Family::Imq: return Real(1) / sqrt(c * c + r * r);
  case Family::Ga: return exp(-c * r * r);
  }
  return Real(0);
}

namespace detail {

// d^n/ds^n (c^2 + s^2)^(1/2)
template <class Real>
Real mq_derivative(Real c, Real s, int order) {
  const Real c2 = c * c;
  const Real q = c2 + s * s;
  const Real rq = std::sqrt(q);
  switch (order) {
  case 1: return s / rq;
  case 2: return c2 / (q * rq);
  case 3: return -3.0 * c2 * s / (q * q * rq);
  case 4: return 3.0 * c2 * (4.0 * s * s - c2) / (q * q * q * rq);
  case 5: return -15.0 * c2 * s * (4.0 * s * s - 3.0 * c2) / (q * q * q * q * rq);
  }
  return 0.0;
}

// d^n/ds^n (c^2 + s^2)^(-1/2)
template <class Real>
Real imq_derivative(Real c, Real s, int order) {
  const Real c2 = c * c;
  const Real s2 = s * s;
  const Real q = c2 + s2;
  const Real rq = std::sqrt(q);
  switch (order) {
  case 1: return -s / (q * rq);
  case 2: return (2.0 * s2 - c2) / (q * q * rq);
  case 3: return -3.0 * s * (2.0 * s2 - 3.0 * c2) / (q * q * q * rq);
  case 4:
    return 3.0 * (3.0 * c2 * c2 - 24.0 * c2 * s2 + 8.0 * s2 * s2) / (q * q * q * q * rq);
  case 5:
    return -15.0 * s * (15.0 * c2 * c2 - 40.0 * c2 * s2 + 8.0 * s2 * s2) /
           (q * q * q * q * q * rq);
  }
  return 0.0;
}

// d^n/ds^n exp(-c s^2) = P_n(s) exp(-c s^2) with P_0 = 1 and
// P_{n+1} = P_n' - 2 c s P_n. Coefficients are stored lowest degree first.
template <class Real>
Real ga_derivative(Real c, Real s, int order) {
  std::array<Real, kMaxDerivativeOrder + 1> p{Real(1)};
  for (int n = 0; n < order; ++n) {
    std::array<Real, kMaxDerivativeOrder + 1> next{};
    for (int k = 1; k <= n; ++k) next[k - 1] += k * p[k];
    for (int k = 0; k <= n; ++k) next[k + 1] -= 2.0 * c * p[k];
    p = next;
  }
  Real poly = 0;
  for (int k = order; k >= 0; --k) poly = poly * s + p[k];
  return poly * std::exp(-c * s * s);
}

} // namespace detail

/// d^order/dx^order of phi(|x - center|), viewing phi as a smooth even
/// function of s = x - center. Orders 0 through 5 are supported.
template <std::floating_point Real = double>
Real kernel_derivative(const KernelSpec& spec, Real x, Real center, int order) {
  if (order < 0 || order > kMaxDerivativeOrder)
    throw InvalidArgument("kernel derivative order " + std::to_string(order) +
                          " outside supported range 0..5");
  const Real s = x - center;
  if (order == 0) return kernel_value(spec, std::abs(s));
  const auto c = static_cast<Real>(spec.shape());
  switch (spec.family()) {
  case Family::Mq: return detail::mq_derivative(c, s, order);
  case Family::Imq: return detail::imq_derivative(c, s, order);
  case Family::Ga: return detail::ga_derivative(c, s, order);
  }
  return Real(0);
}

} // namespace molrbf

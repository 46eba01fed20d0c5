#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molrbf {

/// Raised when a precondition on user-supplied data is violated.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// LU factorization met an exactly zero pivot.
class SingularMatrixError : public std::runtime_error {
public:
  explicit SingularMatrixError(std::size_t pivot)
      : std::runtime_error("singular interpolation matrix: zero pivot at row " +
                           std::to_string(pivot)),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

private:
  std::size_t pivot_;
};

/// Time marching produced a non-finite state.
class BlowUpError : public std::runtime_error {
public:
  BlowUpError(std::size_t step, double time)
      : std::runtime_error("non-finite state at step " + std::to_string(step) +
                           " (t = " + std::to_string(time) + ")"),
        step_(step), time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

private:
  std::size_t step_;
  double time_;
};

} // namespace molrbf

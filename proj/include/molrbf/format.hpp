#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace molrbf {

/// Shortest round-trip decimal form, locale independent. Infinities are
/// written as "inf" / "-inf".
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

} // namespace molrbf

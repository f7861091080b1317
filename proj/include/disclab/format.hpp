#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace disclab {

/// Shortest decimal form of `value` that parses back to the same double.
inline std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace disclab

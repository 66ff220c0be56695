#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace las {

// Shortest decimal string that round-trips to the same binary64 value.
// Canonical program text is hashed, so this formatting is part of the
// canonical-id contract.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace las

#include "stablesim/format.hpp"

#include <charconv>
#include <system_error>

namespace stablesim {

std::string format_double(double value) {
  char buf[2048];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (res.ec != std::errc()) {
    // Only reachable for magnitudes far outside this domain; fall back to
    // the general format rather than truncate.
    const auto gen = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, gen.ptr);
  }
  return std::string(buf, res.ptr);
}

}  // namespace stablesim

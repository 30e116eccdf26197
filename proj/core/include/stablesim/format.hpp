#pragma once

#include <string>

namespace stablesim {

/// Shortest decimal string that parses back to exactly the same double,
/// fixed notation (no exponent), locale independent. Used by every CSV
/// writer so outputs are byte-reproducible.
std::string format_double(double value);

}  // namespace stablesim

#include "stablesim/rebase.hpp"

#include <string>

namespace stablesim {

bool in_band(double price, const PolicyParams& p) {
  const double lo = p.target_price * (1.0 - p.band_halfwidth);
  const double hi = p.target_price * (1.0 + p.band_halfwidth);
  return price >= lo && price <= hi;
}

double rebase_step(double prev_price, double prev_supply, const PolicyParams& p) {
  if (in_band(prev_price, p)) {
    return prev_supply;
  }
  const double deviation = (prev_price - p.target_price) / p.target_price;
  const double factor = 1.0 + deviation / p.adjust_divisor;
  if (!(factor > 0.0)) {
    throw DegenerateSupplyError(
        "rebase would annihilate supply: deviation " + std::to_string(deviation) +
        " with B " + std::to_string(p.adjust_divisor));
  }
  return prev_supply * factor;
}

}  // namespace stablesim

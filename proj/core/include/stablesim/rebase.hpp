#pragma once

#include "stablesim/types.hpp"

namespace stablesim {

/// True iff price lies inside the inactive band, boundaries included.
/// Evaluated against the band edges P*(1-A) and P*(1+A) so that exact edge
/// prices (e.g. 1.05 with A=0.05, P*=1) count as inside.
bool in_band(double price, const PolicyParams& p);

/// One supply-adjustment step given the previous period's price.
///
/// Inside the band the supply is unchanged. Outside it the supply moves by
/// the relative deviation d = (prev_price - P*)/P* divided by B, sign
/// preserving: price above the band expands supply, below contracts it.
///
/// Throws DegenerateSupplyError when 1 + d/B <= 0 (requires B < 1, since
/// d > -1 for any positive price).
double rebase_step(double prev_price, double prev_supply, const PolicyParams& p);

}  // namespace stablesim

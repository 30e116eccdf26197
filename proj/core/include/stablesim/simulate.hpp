#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stablesim/types.hpp"

namespace stablesim {

/// Couple an exogenous market-cap path with the rebase rule.
///
/// S_0 = Y_0 / P* (so the path starts at parity and P_0 = P*); for t >= 1
/// the supply reacts to the previous step's price,
///   S_t = rebase_step(P_{t-1}, S_{t-1}, p),   P_t = Y_t / S_t.
///
/// Throws InvalidParamError if the cap path is empty or contains a
/// non-positive or non-finite value, and DegenerateSupplyError (annotated
/// with the step index) if a rebase would annihilate the supply.
SimPath run_path(std::span<const double> cap_path, const PolicyParams& p);

/// Loss of one path: price_component = sum_{t=1..n} dP_t^2,
/// supply_component = sum_{t=1..n} dS_t^2, total = price + lambda * supply.
LossBreakdown path_loss(const SimPath& path, const LossWeights& w);

/// Per-path CSV dump with header `t,Y,S,P,dP,dS`, full-precision decimal
/// notation. `comment_lines` are emitted first, each prefixed with "# ".
void write_path_csv(std::ostream& out, const SimPath& path,
                    std::span<const std::string> comment_lines = {});

}  // namespace stablesim

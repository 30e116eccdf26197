#pragma once

#include <cstdint>
#include <vector>

#include "stablesim/errors.hpp"

namespace stablesim {

/// The rebase rule. The supply is left alone while the price stays inside
/// the inactive band [P*(1-A), P*(1+A)]; outside it, supply moves by d/B
/// where d is the relative price deviation (P - P*)/P*.
///
/// All constructors validate; an invariant-violating value throws
/// InvalidParamError and is never silently clamped.
struct PolicyParams {
  double band_halfwidth;   ///< A, relative half-width of the inactive band, >= 0
  double adjust_divisor;   ///< B, supply adjusts by d/B per step, > 0
  double target_price;     ///< P*, > 0

  PolicyParams(double band_halfwidth_a, double adjust_divisor_b, double target_price_p_star);
};

/// Geometric Brownian Motion specification for the exogenous market cap.
/// One step per time unit (dt = 1): Y_{t+1} = Y_t * exp(mu - sigma^2/2 + sigma*Z_t).
struct MarketParams {
  double drift;         ///< mu, per-step log drift
  double volatility;    ///< sigma, per-step log volatility, >= 0
  double initial_cap;   ///< Y_0, > 0
  std::int64_t horizon; ///< n, number of steps, >= 1

  static constexpr double dt = 1.0;

  MarketParams(double mu, double sigma, double y0, std::int64_t n);
};

/// Relative weight lambda on squared supply change in the loss.
struct LossWeights {
  double lambda;  ///< >= 0

  explicit LossWeights(double lambda_weight);
};

/// One realized trajectory of the coupled market-cap / supply system.
/// All vectors have n+1 entries (t = 0..n). By construction price[0] is the
/// target price; supply_change[0] is 0 and excluded from every loss sum.
struct SimPath {
  double target_price = 1.0;
  std::vector<double> market_cap;     ///< Y_t
  std::vector<double> supply;         ///< S_t
  std::vector<double> price;          ///< P_t = Y_t / S_t
  std::vector<double> price_dev;      ///< dP_t = (P_t - P*)/P*
  std::vector<double> supply_change;  ///< dS_t = (S_t - S_{t-1})/S_{t-1}

  std::int64_t steps() const noexcept {
    return market_cap.empty() ? 0 : static_cast<std::int64_t>(market_cap.size()) - 1;
  }
};

/// Loss of one path: sum over t = 1..n of dP_t^2 and dS_t^2, combined as
/// total = price_component + lambda * supply_component.
struct LossBreakdown {
  double price_component = 0.0;
  double supply_component = 0.0;
  double total = 0.0;
};

/// total is always computed as price + lambda * supply, in that expression
/// order, so re-weighting stored components reproduces it bit-for-bit.
inline LossBreakdown combine_loss(double price_component, double supply_component,
                                  const LossWeights& w) {
  return LossBreakdown{price_component, supply_component,
                       price_component + w.lambda * supply_component};
}

/// Returns p unchanged if every invariant holds, otherwise throws
/// InvalidParamError naming the offending field.
PolicyParams validate_policy(const PolicyParams& p);

}  // namespace stablesim

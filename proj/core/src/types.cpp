#include "stablesim/types.hpp"

#include <cmath>
#include <string>

namespace stablesim {

namespace {

std::string describe(double v) { return std::to_string(v); }

}  // namespace

PolicyParams::PolicyParams(double band_halfwidth_a, double adjust_divisor_b,
                           double target_price_p_star)
    : band_halfwidth(band_halfwidth_a),
      adjust_divisor(adjust_divisor_b),
      target_price(target_price_p_star) {
  // Negated comparisons so NaN fails validation too.
  if (!(band_halfwidth >= 0.0) || !std::isfinite(band_halfwidth)) {
    throw InvalidParamError("A", "band halfwidth must be finite and >= 0, got " +
                                     describe(band_halfwidth));
  }
  if (!(adjust_divisor > 0.0) || !std::isfinite(adjust_divisor)) {
    throw InvalidParamError("B", "adjust divisor must be finite and > 0, got " +
                                     describe(adjust_divisor));
  }
  if (!(target_price > 0.0) || !std::isfinite(target_price)) {
    throw InvalidParamError("P_star", "target price must be finite and > 0, got " +
                                          describe(target_price));
  }
}

MarketParams::MarketParams(double mu, double sigma, double y0, std::int64_t n)
    : drift(mu), volatility(sigma), initial_cap(y0), horizon(n) {
  if (!std::isfinite(drift)) {
    throw InvalidParamError("mu", "drift must be finite, got " + describe(drift));
  }
  if (!(volatility >= 0.0) || !std::isfinite(volatility)) {
    throw InvalidParamError("sigma", "volatility must be finite and >= 0, got " +
                                         describe(volatility));
  }
  if (!(initial_cap > 0.0) || !std::isfinite(initial_cap)) {
    throw InvalidParamError("Y0", "initial cap must be finite and > 0, got " +
                                      describe(initial_cap));
  }
  if (horizon < 1) {
    throw InvalidParamError("n", "horizon must be >= 1, got " + std::to_string(horizon));
  }
}

LossWeights::LossWeights(double lambda_weight) : lambda(lambda_weight) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidParamError("lambda", "loss weight must be finite and >= 0, got " +
                                          describe(lambda));
  }
}

PolicyParams validate_policy(const PolicyParams& p) {
  return PolicyParams(p.band_halfwidth, p.adjust_divisor, p.target_price);
}

}  // namespace stablesim

#include "stablesim/gbm.hpp"

#include <cmath>
#include <numbers>

namespace stablesim {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Stafford mix13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_state(PathSeed seed) {
  // Two mixing rounds give full avalanche between the master seed and the
  // path counter; adjacent indices land in unrelated states.
  return mix64(mix64(seed.master_seed + kGamma) ^ (seed.path_index + kGamma));
}

}  // namespace

NormalStream::NormalStream(PathSeed seed) : state_(stream_state(seed)) {}

std::uint64_t NormalStream::next_raw() {
  state_ += kGamma;
  return mix64(state_);
}

double NormalStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Top 53 bits -> uniforms; u1 shifted into (0,1] so log(u1) is finite.
  const double u1 = static_cast<double>((next_raw() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

std::vector<double> generate_cap_path(const MarketParams& m, PathSeed seed) {
  NormalStream stream(seed);
  const std::size_t n = static_cast<std::size_t>(m.horizon);
  std::vector<double> cap(n + 1);
  cap[0] = m.initial_cap;
  const double log_drift = m.drift - 0.5 * m.volatility * m.volatility;
  for (std::size_t t = 0; t < n; ++t) {
    cap[t + 1] = cap[t] * std::exp(log_drift + m.volatility * stream.next());
  }
  return cap;
}

}  // namespace stablesim

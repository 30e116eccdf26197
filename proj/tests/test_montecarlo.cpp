#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "stablesim/montecarlo.hpp"

using namespace stablesim;

namespace {

const MarketParams kBenchmarkMarket(0.0, 0.05, 100e6, 100);
const PolicyParams kBenchmarkPolicy(0.05, 5.0, 1.0);

// ---------------------------------------------------------------------------
// Straight-line serial reimplementation of the whole estimate, sharing no
// code with the library path. It re-derives the pinned randomness (SplitMix64
// seeding, Box-Muller), the GBM recurrence, the rebase rule, and the loss,
// then averages serially. Used to validate estimate_loss before freezing its
// golden value.

constexpr std::uint64_t kOracleGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t oracle_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct OracleStream {
  std::uint64_t state;
  double cached = 0.0;
  bool has_cached = false;

  OracleStream(std::uint64_t master, std::uint64_t index)
      : state(oracle_mix(oracle_mix(master + kOracleGamma) ^ (index + kOracleGamma))) {}

  std::uint64_t raw() {
    state += kOracleGamma;
    return oracle_mix(state);
  }

  double normal() {
    if (has_cached) {
      has_cached = false;
      return cached;
    }
    const double u1 = static_cast<double>((raw() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(raw() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    cached = r * std::sin(theta);
    has_cached = true;
    return r * std::cos(theta);
  }
};

struct OracleEstimate {
  double mean_total;
  double mean_price;
  double mean_supply;
};

OracleEstimate oracle_estimate(double mu, double sigma, double y0, int n, double a,
                               double b, double p_star, double lambda, int n_paths,
                               std::uint64_t master_seed) {
  double sum_price = 0.0;
  double sum_supply = 0.0;
  for (int i = 0; i < n_paths; ++i) {
    OracleStream stream(master_seed, static_cast<std::uint64_t>(i));
    double cap = y0;
    double supply = y0 / p_star;
    double price = p_star;
    double price_sq = 0.0;
    double supply_sq = 0.0;
    for (int t = 1; t <= n; ++t) {
      cap *= std::exp((mu - 0.5 * sigma * sigma) + sigma * stream.normal());
      double next_supply = supply;
      if (price < p_star * (1.0 - a) || price > p_star * (1.0 + a)) {
        next_supply = supply * (1.0 + ((price - p_star) / p_star) / b);
      }
      const double ds = (next_supply - supply) / supply;
      supply = next_supply;
      price = cap / supply;
      const double dp = (price - p_star) / p_star;
      price_sq += dp * dp;
      supply_sq += ds * ds;
    }
    sum_price += price_sq;
    sum_supply += supply_sq;
  }
  const double mean_price = sum_price / n_paths;
  const double mean_supply = sum_supply / n_paths;
  return OracleEstimate{mean_price + lambda * mean_supply, mean_price, mean_supply};
}

}  // namespace

TEST_CASE("flat market: zero loss and zero standard error") {
  const MarketParams flat(0.0, 0.0, 100e6, 50);
  const EstimateResult r =
      estimate_loss(flat, kBenchmarkPolicy, LossWeights(1.0), 10, 99);
  CHECK(r.mean_total == 0.0);
  CHECK(r.mean_price_component == 0.0);
  CHECK(r.mean_supply_component == 0.0);
  CHECK(r.std_error == 0.0);
  CHECK(r.n_paths == 10);
  CHECK(r.n_failed == 0);
}

TEST_CASE("estimates are bit-identical across runs and worker counts") {
  const EstimateResult once =
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(1.0), 64, 5, 1);
  const EstimateResult again =
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(1.0), 64, 5, 1);
  const EstimateResult threaded =
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(1.0), 64, 5, 4);
  const EstimateResult threads7 =
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(1.0), 64, 5, 7);
  CHECK(once == again);
  CHECK(once == threaded);
  CHECK(once == threads7);
}

TEST_CASE("estimate matches the serial oracle and the frozen golden value") {
  const EstimateResult r =
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(1.0), 1000, 7, 2);
  const OracleEstimate oracle =
      oracle_estimate(0.0, 0.05, 100e6, 100, 0.05, 5.0, 1.0, 1.0, 1000, 7);

  CHECK(r.mean_total == doctest::Approx(oracle.mean_total).epsilon(1e-12));
  CHECK(r.mean_price_component == doctest::Approx(oracle.mean_price).epsilon(1e-12));
  CHECK(r.mean_supply_component == doctest::Approx(oracle.mean_supply).epsilon(1e-12));

  // Frozen after the oracle comparison above first passed.
  CHECK(r.mean_total == doctest::Approx(0.73106262040548498).epsilon(1e-9));
  CHECK(r.std_error == doctest::Approx(0.0065814138485631897).epsilon(1e-9));
  CHECK(r.n_failed == 0);
}

TEST_CASE("mean_total re-weights exactly from stored components") {
  for (double lambda : {0.0, 1.0, 10.0}) {
    const EstimateResult r = estimate_loss(kBenchmarkMarket, kBenchmarkPolicy,
                                           LossWeights(lambda), 100, 3);
    CHECK(r.mean_total ==
          r.mean_price_component + lambda * r.mean_supply_component);
  }
}

TEST_CASE("CRN: identical configurations give identical results") {
  const std::vector<PolicyConfig> configs{
      {kBenchmarkPolicy, LossWeights(1.0)},
      {kBenchmarkPolicy, LossWeights(1.0)},
  };
  const auto results = estimate_loss_crn(kBenchmarkMarket, configs, 50, 17);
  REQUIRE(results.size() == 2);
  CHECK(results[0] == results[1]);
}

TEST_CASE("CRN: single configuration matches estimate_loss exactly") {
  const std::vector<PolicyConfig> configs{{kBenchmarkPolicy, LossWeights(2.0)}};
  const auto results = estimate_loss_crn(kBenchmarkMarket, configs, 80, 23, 3);
  const EstimateResult direct =
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(2.0), 80, 23, 2);
  REQUIRE(results.size() == 1);
  CHECK(results[0] == direct);
}

TEST_CASE("CRN: a wider inactive range costs more") {
  const std::vector<PolicyConfig> configs{
      {PolicyParams(0.02, 5.0, 1.0), LossWeights(1.0)},
      {PolicyParams(0.10, 5.0, 1.0), LossWeights(1.0)},
  };
  const auto results = estimate_loss_crn(kBenchmarkMarket, configs, 200, 7);
  CHECK(results[0].mean_total < results[1].mean_total);
}

TEST_CASE("standard error shrinks like 1/sqrt(n_paths)") {
  const EstimateResult small =
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(1.0), 200, 11);
  const EstimateResult large =
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(1.0), 800, 11);
  const double ratio = small.std_error / large.std_error;
  CHECK(ratio > 2.0 / 1.5);
  CHECK(ratio < 2.0 * 1.5);
}

TEST_CASE("failed paths are excluded and counted") {
  // B = 0.5 overshoots every correction; volatile paths eventually cross
  // d <= -B and die, others survive the short horizon.
  const MarketParams wild(0.0, 0.8, 1e6, 5);
  const PolicyParams fragile(0.05, 0.5, 1.0);
  const EstimateResult r = estimate_loss(wild, fragile, LossWeights(1.0), 50, 4);
  CHECK(r.n_failed > 0);
  CHECK(r.n_failed < 50);
  CHECK(r.n_paths == 50);
  CHECK(std::isfinite(r.mean_total));
  CHECK(r.mean_total > 0.0);
}

TEST_CASE("all paths failing raises AllPathsFailed") {
  // sigma = 0, mu = -1: deterministic crash to P_1 = e^-1, d = -0.63 <= -B.
  const MarketParams crash(-1.0, 0.0, 1e6, 10);
  const PolicyParams fragile(0.05, 0.5, 1.0);
  CHECK_THROWS_AS(estimate_loss(crash, fragile, LossWeights(1.0), 10, 1),
                  AllPathsFailedError);
}

TEST_CASE("estimate_loss validates n_paths") {
  CHECK_THROWS_AS(
      estimate_loss(kBenchmarkMarket, kBenchmarkPolicy, LossWeights(1.0), 0, 1),
      InvalidParamError);
}

TEST_CASE("estimate_loss_crn requires a configuration") {
  CHECK_THROWS_AS(estimate_loss_crn(kBenchmarkMarket, {}, 10, 1), InvalidParamError);
}

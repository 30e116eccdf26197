#include <doctest.h>

#include <cmath>

#include "stablesim/gbm.hpp"
#include "stablesim/rebase.hpp"

using namespace stablesim;

namespace {
const PolicyParams kBenchmark(0.05, 5.0, 1.0);
}

TEST_CASE("band boundaries are inclusive") {
  CHECK(in_band(1.05, kBenchmark));   // [0.95, 1.05] includes its edges
  CHECK(in_band(0.95, kBenchmark));
  CHECK(in_band(1.0, kBenchmark));
  CHECK_FALSE(in_band(1.0500001, kBenchmark));
  CHECK_FALSE(in_band(0.9499999, kBenchmark));
}

TEST_CASE("zero band accepts only the exact target") {
  const PolicyParams p(0.0, 1.0, 1.0);
  CHECK(in_band(1.0, p));
  CHECK_FALSE(in_band(1.0 + 1e-12, p));
  CHECK_FALSE(in_band(1.0 - 1e-12, p));
}

TEST_CASE("band scales with the target price") {
  const PolicyParams p(0.05, 5.0, 2.0);
  CHECK(in_band(2.0, p));
  CHECK(in_band(2.1, p));     // 2 * 1.05
  CHECK(in_band(1.9, p));     // 2 * 0.95
  CHECK_FALSE(in_band(2.11, p));
  CHECK_FALSE(in_band(1.89, p));
}

TEST_CASE("in-band price leaves supply unchanged") {
  CHECK(rebase_step(1.00, 100.0, kBenchmark) == 100.0);
  CHECK(rebase_step(1.05, 100.0, kBenchmark) == 100.0);
  CHECK(rebase_step(0.96, 12345.0, kBenchmark) == 12345.0);
}

TEST_CASE("expansion above band: dS = dP/B") {
  // dP = 0.10 -> dS = 0.02 -> supply 100 -> 102
  CHECK(rebase_step(1.10, 100.0, kBenchmark) == doctest::Approx(102.0).epsilon(1e-12));
}

TEST_CASE("contraction below band is sign-preserving") {
  // dP = -0.10 -> dS = -0.02 -> supply 100 -> 98
  CHECK(rebase_step(0.90, 100.0, kBenchmark) == doctest::Approx(98.0).epsilon(1e-12));
}

TEST_CASE("rebase is proportional in supply") {
  // Scaling every wallet scales the total: k * rebase(S) == rebase(k * S).
  for (double k : {2.0, 0.5, 8.0}) {  // powers of two: exact in fp
    CHECK(rebase_step(1.2, k * 100.0, kBenchmark) ==
          k * rebase_step(1.2, 100.0, kBenchmark));
  }
  NormalStream pick(PathSeed{3, 1});
  for (int i = 0; i < 100; ++i) {
    const double k = 0.1 + std::abs(pick.next()) * 10.0;
    const double price = 0.5 + std::abs(pick.next());
    const double lhs = rebase_step(price, k * 100.0, kBenchmark);
    const double rhs = k * rebase_step(price, 100.0, kBenchmark);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("rebase damps the implied price toward target without overshoot") {
  NormalStream pick(PathSeed{3, 2});
  for (int i = 0; i < 200; ++i) {
    const double b = 1.0 + std::abs(pick.next()) * 9.0;
    const PolicyParams p(0.05, b, 1.0);
    // out-of-band price from either side
    const double price = i % 2 == 0 ? 1.06 + std::abs(pick.next())
                                    : 0.94 / (1.0 + std::abs(pick.next()));
    const double supply = 1e6;
    const double cap = price * supply;
    const double new_supply = rebase_step(price, supply, p);
    const double implied = cap / new_supply;

    if (b > 1.0) {
      CHECK(std::abs(implied - 1.0) < std::abs(price - 1.0));
    }
    // no overshoot past the target for B >= 1
    if (price > 1.0) {
      CHECK(implied >= 1.0);
    } else {
      CHECK(implied <= 1.0);
    }
  }
}

TEST_CASE("repeated in-band rebases are idempotent") {
  double supply = 100.0;
  for (int i = 0; i < 10; ++i) supply = rebase_step(1.03, supply, kBenchmark);
  CHECK(supply == 100.0);
}

TEST_CASE("supply annihilation throws for B < 1") {
  const PolicyParams p(0.0, 0.5, 1.0);
  // d = -0.6 <= -B = -0.5 -> factor 1 + d/B = -0.2
  CHECK_THROWS_AS(rebase_step(0.4, 100.0, p), DegenerateSupplyError);
  // just above the threshold survives: d = -0.4, factor = 0.2
  CHECK(rebase_step(0.6, 100.0, p) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("B >= 1 never degenerates for positive prices") {
  const PolicyParams p(0.0, 1.0, 1.0);
  // worst case d -> -1 as price -> 0: factor = 1 + d stays positive
  for (double price : {1e-1, 1e-3, 1e-6, 1e-12}) {
    const double s = rebase_step(price, 100.0, p);
    CHECK(s > 0.0);
  }
}

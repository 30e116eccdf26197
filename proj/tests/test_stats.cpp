#include <doctest.h>

#include <cmath>
#include <vector>

#include "stablesim/errors.hpp"
#include "stablesim/stats.hpp"

using namespace stablesim;

TEST_CASE("mean and sample variance") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(mean(v) == 2.5);
  CHECK(sample_variance(v) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(sample_variance(std::vector<double>{7.0}) == 0.0);
}

TEST_CASE("spearman on monotone data") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> inc{1.0, 4.0, 9.0, 16.0, 25.0};
  const std::vector<double> dec{25.0, 16.0, 9.0, 4.0, 1.0};
  CHECK(spearman(x, inc) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spearman(x, dec) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("spearman with ties uses average ranks") {
  // y ranks: 1, 2.5, 2.5, 4 -> hand-computed Pearson on ranks vs 1,2,3,4.
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{10.0, 20.0, 20.0, 30.0};
  // cov terms: (-1.5)(-1.5) + (-0.5)(0) + (0.5)(0) + (1.5)(1.5) = 4.5
  // var_x = 5, var_y = 4.5 -> rho = 4.5 / sqrt(5 * 4.5)
  CHECK(spearman(x, y) == doctest::Approx(4.5 / std::sqrt(22.5)).epsilon(1e-15));
}

TEST_CASE("spearman of a constant series is 0") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y{5.0, 5.0, 5.0};
  CHECK(spearman(x, y) == 0.0);
}

TEST_CASE("spearman rejects bad input") {
  const std::vector<double> x{1.0, 2.0};
  const std::vector<double> y{1.0};
  CHECK_THROWS_AS(spearman(x, y), InvalidParamError);
  CHECK_THROWS_AS(spearman(y, y), InvalidParamError);
}

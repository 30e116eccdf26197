#pragma once

#include <span>

namespace stablesim {

/// Arithmetic mean, accumulated in index order.
double mean(std::span<const double> values);

/// Unbiased sample variance (n-1 denominator), two-pass. Zero for n < 2.
double sample_variance(std::span<const double> values);

/// Spearman rank correlation with average ranks for ties.
/// Requires x.size() == y.size() >= 2.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace stablesim

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stablesim/types.hpp"

namespace stablesim {

/// Monte Carlo estimate of the expected loss for one configuration.
struct EstimateResult {
  double mean_total = 0.0;
  double mean_price_component = 0.0;
  double mean_supply_component = 0.0;
  double std_error = 0.0;       ///< sample std of per-path totals / sqrt(successes)
  std::int64_t n_paths = 0;     ///< paths attempted
  std::int64_t n_failed = 0;    ///< paths that hit DegenerateSupply (excluded)

  bool operator==(const EstimateResult&) const = default;
};

/// One policy/weight pair for common-random-number evaluation.
struct PolicyConfig {
  PolicyParams policy;
  LossWeights weights;
};

/// Loss components of a single path; lambda-independent, so one set of
/// samples serves every weight.
struct PathSample {
  double price_component = 0.0;
  double supply_component = 0.0;
  bool failed = false;
};

/// Components of one cap path under one policy. DegenerateSupply is recorded
/// as a failed sample, never thrown.
PathSample sample_path_loss(std::span<const double> cap_path, const PolicyParams& p);

/// The common-random-number path set: path i is generated from
/// PathSeed{master_seed, i}, identical for any worker count.
std::vector<std::vector<double>> generate_path_set(const MarketParams& m,
                                                   std::int64_t n_paths,
                                                   std::uint64_t master_seed,
                                                   unsigned workers = 1);

/// Deterministic index-order reduction of per-path samples to an estimate.
/// mean_total is defined as mean_price + lambda * mean_supply, so stored
/// components re-weighted at a different lambda reproduce it exactly.
/// Returns nullopt when every sample failed.
std::optional<EstimateResult> try_reduce_samples(std::span<const PathSample> samples,
                                                 const LossWeights& w);

/// As try_reduce_samples, but throws AllPathsFailedError instead.
EstimateResult reduce_samples(std::span<const PathSample> samples, const LossWeights& w);

/// Average path loss over n_paths seeded GBM draws. Failed paths are
/// excluded from the averages and counted in n_failed. The result is
/// bit-identical for any worker count.
///
/// Throws InvalidParamError for n_paths < 1 and AllPathsFailedError when no
/// path survives.
EstimateResult estimate_loss(const MarketParams& m, const PolicyParams& p,
                             const LossWeights& w, std::int64_t n_paths,
                             std::uint64_t master_seed, unsigned workers = 1);

/// Evaluate several configurations on the SAME cap paths (common random
/// numbers), so cross-configuration differences are not polluted by sampling
/// noise. Element i equals estimate_loss(m, configs[i], ...) exactly.
std::vector<EstimateResult> estimate_loss_crn(const MarketParams& m,
                                              std::span<const PolicyConfig> configs,
                                              std::int64_t n_paths,
                                              std::uint64_t master_seed,
                                              unsigned workers = 1);

}  // namespace stablesim

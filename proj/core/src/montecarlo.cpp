#include "stablesim/montecarlo.hpp"

#include <cmath>

#include "stablesim/gbm.hpp"
#include "stablesim/parallel.hpp"
#include "stablesim/simulate.hpp"
#include "stablesim/stats.hpp"

namespace stablesim {

PathSample sample_path_loss(std::span<const double> cap_path, const PolicyParams& p) {
  try {
    const SimPath path = run_path(cap_path, p);
    // Any weight works here: the components do not depend on lambda.
    const LossBreakdown b = path_loss(path, LossWeights(0.0));
    return PathSample{b.price_component, b.supply_component, false};
  } catch (const DegenerateSupplyError&) {
    return PathSample{0.0, 0.0, true};
  }
}

std::vector<std::vector<double>> generate_path_set(const MarketParams& m,
                                                   std::int64_t n_paths,
                                                   std::uint64_t master_seed,
                                                   unsigned workers) {
  if (n_paths < 1) {
    throw InvalidParamError("n_paths", "need at least one path, got " +
                                           std::to_string(n_paths));
  }
  std::vector<std::vector<double>> caps(static_cast<std::size_t>(n_paths));
  parallel_for(caps.size(), workers, [&](std::size_t i) {
    caps[i] = generate_cap_path(m, PathSeed{master_seed, static_cast<std::uint64_t>(i)});
  });
  return caps;
}

std::optional<EstimateResult> try_reduce_samples(std::span<const PathSample> samples,
                                                 const LossWeights& w) {
  double sum_price = 0.0;
  double sum_supply = 0.0;
  std::vector<double> totals;
  totals.reserve(samples.size());
  std::int64_t failed = 0;
  for (const PathSample& s : samples) {
    if (s.failed) {
      ++failed;
      continue;
    }
    sum_price += s.price_component;
    sum_supply += s.supply_component;
    totals.push_back(s.price_component + w.lambda * s.supply_component);
  }
  if (totals.empty()) return std::nullopt;

  const double k = static_cast<double>(totals.size());
  EstimateResult r;
  r.mean_price_component = sum_price / k;
  r.mean_supply_component = sum_supply / k;
  r.mean_total = r.mean_price_component + w.lambda * r.mean_supply_component;
  r.std_error = totals.size() < 2 ? 0.0 : std::sqrt(sample_variance(totals) / k);
  r.n_paths = static_cast<std::int64_t>(samples.size());
  r.n_failed = failed;
  return r;
}

EstimateResult reduce_samples(std::span<const PathSample> samples, const LossWeights& w) {
  auto r = try_reduce_samples(samples, w);
  if (!r) {
    throw AllPathsFailedError("every path hit DegenerateSupply (" +
                              std::to_string(samples.size()) + " paths)");
  }
  return *r;
}

EstimateResult estimate_loss(const MarketParams& m, const PolicyParams& p,
                             const LossWeights& w, std::int64_t n_paths,
                             std::uint64_t master_seed, unsigned workers) {
  if (n_paths < 1) {
    throw InvalidParamError("n_paths", "need at least one path, got " +
                                           std::to_string(n_paths));
  }
  std::vector<PathSample> samples(static_cast<std::size_t>(n_paths));
  parallel_for(samples.size(), workers, [&](std::size_t i) {
    const auto cap =
        generate_cap_path(m, PathSeed{master_seed, static_cast<std::uint64_t>(i)});
    samples[i] = sample_path_loss(cap, p);
  });
  return reduce_samples(samples, w);
}

std::vector<EstimateResult> estimate_loss_crn(const MarketParams& m,
                                              std::span<const PolicyConfig> configs,
                                              std::int64_t n_paths,
                                              std::uint64_t master_seed,
                                              unsigned workers) {
  if (configs.empty()) {
    throw InvalidParamError("configs", "need at least one configuration");
  }
  const auto caps = generate_path_set(m, n_paths, master_seed, workers);
  const std::size_t paths = caps.size();

  std::vector<std::vector<PathSample>> samples(
      configs.size(), std::vector<PathSample>(paths));
  parallel_for(configs.size() * paths, workers, [&](std::size_t flat) {
    const std::size_t c = flat / paths;
    const std::size_t i = flat % paths;
    samples[c][i] = sample_path_loss(caps[i], configs[c].policy);
  });

  std::vector<EstimateResult> results;
  results.reserve(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    results.push_back(reduce_samples(samples[c], configs[c].weights));
  }
  return results;
}

}  // namespace stablesim

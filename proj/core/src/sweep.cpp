#include "stablesim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "stablesim/format.hpp"
#include "stablesim/parallel.hpp"
#include "stablesim/stats.hpp"

namespace stablesim {

namespace {

void check_axis(const std::vector<double>& values, const char* name, bool require_positive) {
  if (values.empty()) {
    throw InvalidParamError(name, "grid axis must be non-empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool in_range = require_positive ? values[i] > 0.0 : values[i] >= 0.0;
    if (!std::isfinite(values[i]) || !in_range) {
      throw InvalidParamError(name, "grid value " + std::to_string(values[i]) +
                                        " fails policy validation");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw InvalidParamError(name, "grid values must be strictly increasing");
    }
  }
}

// Per-cell per-path samples over one shared cap-path set; the single code
// path behind sweep_grid and lambda_frontier, so their reductions agree
// bit-for-bit.
std::vector<std::vector<PathSample>> sample_grid(const MarketParams& m,
                                                 const GridSpec& grid,
                                                 std::int64_t n_paths,
                                                 std::uint64_t master_seed,
                                                 double target_price, unsigned workers) {
  std::vector<PolicyParams> policies;
  policies.reserve(grid.size());
  for (double a : grid.a_values) {
    for (double b : grid.b_values) {
      policies.emplace_back(a, b, target_price);
    }
  }

  const auto caps = generate_path_set(m, n_paths, master_seed, workers);
  const std::size_t paths = caps.size();

  std::vector<std::vector<PathSample>> samples(policies.size(),
                                               std::vector<PathSample>(paths));
  parallel_for(policies.size() * paths, workers, [&](std::size_t flat) {
    const std::size_t c = flat / paths;
    const std::size_t i = flat % paths;
    samples[c][i] = sample_path_loss(caps[i], policies[c]);
  });
  return samples;
}

std::vector<SurfaceCell> reduce_grid(const GridSpec& grid,
                                     const std::vector<std::vector<PathSample>>& samples,
                                     const LossWeights& w) {
  std::vector<SurfaceCell> cells;
  cells.reserve(grid.size());
  std::size_t c = 0;
  for (double a : grid.a_values) {
    for (double b : grid.b_values) {
      cells.push_back(SurfaceCell{a, b, try_reduce_samples(samples[c], w)});
      ++c;
    }
  }
  return cells;
}

// Cells are ordered (A asc, B asc); keeping the first strict minimum makes
// the tie-break total and deterministic.
const SurfaceCell& argmin_cell(std::span<const SurfaceCell> cells) {
  const SurfaceCell* best = nullptr;
  for (const SurfaceCell& cell : cells) {
    if (!cell.estimate) continue;
    if (best == nullptr || cell.estimate->mean_total < best->estimate->mean_total) {
      best = &cell;
    }
  }
  if (best == nullptr) {
    throw EmptySurfaceError("no grid cell produced a successful estimate");
  }
  return *best;
}

}  // namespace

GridSpec::GridSpec(std::vector<double> a, std::vector<double> b)
    : a_values(std::move(a)), b_values(std::move(b)) {
  check_axis(a_values, "a_values", /*require_positive=*/false);
  check_axis(b_values, "b_values", /*require_positive=*/true);
}

std::vector<double> grid_axis(double first, double last, double step) {
  if (!std::isfinite(first) || !std::isfinite(last) || !(step > 0.0) ||
      !std::isfinite(step) || last < first) {
    throw InvalidParamError("grid_axis", "need finite first <= last and step > 0");
  }
  std::vector<double> v;
  // Index-based fill avoids accumulating the step error.
  const auto count = static_cast<std::size_t>(std::llround((last - first) / step)) + 1;
  v.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    v.push_back(first + step * static_cast<double>(i));
  }
  return v;
}

GridSpec default_grid() {
  return GridSpec(grid_axis(0.0, 0.10, 0.01), grid_axis(1.0, 10.0, 0.5));
}

LossSurface sweep_grid(const MarketParams& m, const GridSpec& grid, const LossWeights& w,
                       std::int64_t n_paths, std::uint64_t master_seed,
                       double target_price, unsigned workers) {
  const auto samples = sample_grid(m, grid, n_paths, master_seed, target_price, workers);
  return LossSurface{SweepProvenance{m, w, target_price, n_paths, master_seed}, grid,
                     reduce_grid(grid, samples, w)};
}

OptimalPolicy optimal_policy(const LossSurface& surface) {
  const SurfaceCell& best = argmin_cell(surface.cells);
  return OptimalPolicy{best.band_halfwidth, best.adjust_divisor, *best.estimate};
}

std::vector<FrontierPoint> lambda_frontier(const MarketParams& m, const GridSpec& grid,
                                           std::span<const double> lambdas,
                                           std::int64_t n_paths, std::uint64_t master_seed,
                                           double target_price, unsigned workers) {
  if (lambdas.empty()) {
    throw InvalidParamError("lambdas", "need at least one lambda");
  }
  const auto samples = sample_grid(m, grid, n_paths, master_seed, target_price, workers);

  std::vector<FrontierPoint> frontier;
  frontier.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const LossWeights w(lambda);
    const auto cells = reduce_grid(grid, samples, w);
    const SurfaceCell& best = argmin_cell(cells);
    frontier.push_back(
        FrontierPoint{lambda, best.band_halfwidth, best.adjust_divisor, *best.estimate});
  }
  return frontier;
}

double loss_monotonicity_in_a(const MarketParams& m, std::span<const double> a_values,
                              double b_fixed, const LossWeights& w, std::int64_t n_paths,
                              std::uint64_t master_seed, double target_price,
                              unsigned workers) {
  const GridSpec grid(std::vector<double>(a_values.begin(), a_values.end()),
                      std::vector<double>{b_fixed});
  const LossSurface surface =
      sweep_grid(m, grid, w, n_paths, master_seed, target_price, workers);

  std::vector<double> totals;
  totals.reserve(surface.cells.size());
  for (const SurfaceCell& cell : surface.cells) {
    if (!cell.estimate) {
      throw AllPathsFailedError("monotonicity check: cell A=" +
                                std::to_string(cell.band_halfwidth) + " has no estimate");
    }
    totals.push_back(cell.estimate->mean_total);
  }
  return spearman(a_values, totals);
}

std::vector<RobustnessReport> robustness_battery(const SweepConfig& base,
                                                 std::span<const MarketParams> variants) {
  if (variants.empty()) {
    throw InvalidParamError("variants", "need at least one market variant");
  }
  std::vector<RobustnessReport> reports;
  reports.reserve(variants.size());
  for (const MarketParams& market : variants) {
    RobustnessReport report{market, 0.0, {}};
    report.spearman_in_a = loss_monotonicity_in_a(
        market, base.grid.a_values, base.monotonicity_b, base.weights, base.n_paths,
        base.master_seed, base.target_price, base.workers);
    report.frontier =
        lambda_frontier(market, base.grid, base.frontier_lambdas, base.n_paths,
                        base.master_seed, base.target_price, base.workers);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<MarketParams> standard_robustness_variants(const MarketParams& base) {
  return {
      MarketParams(0.01, base.volatility, base.initial_cap, base.horizon),
      MarketParams(-0.01, base.volatility, base.initial_cap, base.horizon),
      MarketParams(base.drift, 0.5, base.initial_cap, base.horizon),
  };
}

void write_surface_csv(std::ostream& out, const LossSurface& surface,
                       std::span<const std::string> comment_lines) {
  for (const auto& line : comment_lines) {
    out << "# " << line << '\n';
  }
  out << "A,B,mean_total,mean_price,mean_supply,std_error,n_failed\n";
  for (const SurfaceCell& cell : surface.cells) {
    out << format_double(cell.band_halfwidth) << ',' << format_double(cell.adjust_divisor)
        << ',';
    if (cell.estimate) {
      out << format_double(cell.estimate->mean_total) << ','
          << format_double(cell.estimate->mean_price_component) << ','
          << format_double(cell.estimate->mean_supply_component) << ','
          << format_double(cell.estimate->std_error) << ',' << cell.estimate->n_failed
          << '\n';
    } else {
      out << "nan,nan,nan,nan," << surface.provenance.n_paths << '\n';
    }
  }
}

void write_frontier_csv(std::ostream& out, std::span<const FrontierPoint> frontier,
                        std::span<const std::string> comment_lines) {
  for (const auto& line : comment_lines) {
    out << "# " << line << '\n';
  }
  out << "lambda,A_star,B_star,mean_total\n";
  for (const FrontierPoint& point : frontier) {
    out << format_double(point.lambda) << ',' << format_double(point.band_halfwidth)
        << ',' << format_double(point.adjust_divisor) << ','
        << format_double(point.estimate.mean_total) << '\n';
  }
}

}  // namespace stablesim

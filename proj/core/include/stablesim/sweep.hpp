#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stablesim/montecarlo.hpp"
#include "stablesim/types.hpp"

namespace stablesim {

/// Candidate (A, B) grid. Values must be strictly increasing, with every A
/// and B individually valid as policy parameters.
struct GridSpec {
  std::vector<double> a_values;
  std::vector<double> b_values;

  GridSpec(std::vector<double> a, std::vector<double> b);

  std::size_t size() const noexcept { return a_values.size() * b_values.size(); }
};

/// A in {0.00, 0.01, ..., 0.10}, B in {1.0, 1.5, ..., 10.0}.
GridSpec default_grid();

/// Inclusive arithmetic progression first, first+step, ..., last. The count
/// is rounded from (last-first)/step, so decimal steps with binary drift
/// (e.g. 0.01) still land on the intended grid.
std::vector<double> grid_axis(double first, double last, double step);

struct SurfaceCell {
  double band_halfwidth = 0.0;
  double adjust_divisor = 0.0;
  /// nullopt when every path failed for this cell.
  std::optional<EstimateResult> estimate;
};

/// Everything needed to regenerate a surface bit-identically.
struct SweepProvenance {
  MarketParams market;
  LossWeights weights;
  double target_price;
  std::int64_t n_paths;
  std::uint64_t master_seed;
};

/// Loss estimates over a grid, evaluated with common random numbers.
/// Cells are A-major: cells[ia * b_values.size() + ib].
struct LossSurface {
  SweepProvenance provenance;
  GridSpec grid;
  std::vector<SurfaceCell> cells;
};

/// Evaluate every (A, B) on the same seeded cap paths. Per-cell all-path
/// failures are recorded in the surface, not thrown.
LossSurface sweep_grid(const MarketParams& m, const GridSpec& grid, const LossWeights& w,
                       std::int64_t n_paths, std::uint64_t master_seed,
                       double target_price = 1.0, unsigned workers = 1);

struct OptimalPolicy {
  double band_halfwidth = 0.0;
  double adjust_divisor = 0.0;
  EstimateResult estimate;
};

/// Grid cell minimizing mean_total. Ties break to the smaller A, then the
/// smaller B. Throws EmptySurfaceError when no cell succeeded.
OptimalPolicy optimal_policy(const LossSurface& surface);

struct FrontierPoint {
  double lambda = 0.0;
  double band_halfwidth = 0.0;   ///< A*
  double adjust_divisor = 0.0;   ///< B*
  EstimateResult estimate;
};

/// Optimal (A*, B*) per lambda over one shared cap-path set. The loss
/// components of each cell are computed once and re-weighted per lambda
/// (the loss is affine in lambda), which is exact, not an approximation.
std::vector<FrontierPoint> lambda_frontier(const MarketParams& m, const GridSpec& grid,
                                           std::span<const double> lambdas,
                                           std::int64_t n_paths, std::uint64_t master_seed,
                                           double target_price = 1.0, unsigned workers = 1);

/// Spearman rank correlation between A and mean_total with B held fixed --
/// the "loss increases with the inactive range" statistic.
double loss_monotonicity_in_a(const MarketParams& m, std::span<const double> a_values,
                              double b_fixed, const LossWeights& w, std::int64_t n_paths,
                              std::uint64_t master_seed, double target_price = 1.0,
                              unsigned workers = 1);

/// Base configuration for a robustness battery.
struct SweepConfig {
  MarketParams market;
  GridSpec grid;
  LossWeights weights;
  std::int64_t n_paths = 200;
  std::uint64_t master_seed = 0;
  double target_price = 1.0;
  unsigned workers = 1;
  double monotonicity_b = 5.0;                  ///< B slice for the loss-vs-A check
  std::vector<double> frontier_lambdas{0.5, 10.0};
};

struct RobustnessReport {
  MarketParams market;
  double spearman_in_a = 0.0;
  std::vector<FrontierPoint> frontier;
};

/// Rerun the monotonicity check and the lambda frontier under each market
/// variant.
std::vector<RobustnessReport> robustness_battery(const SweepConfig& base,
                                                 std::span<const MarketParams> variants);

/// The three market variants studied for robustness: drift +0.01, drift
/// -0.01 (volatility as in base), and volatility 0.5 (drift as in base).
std::vector<MarketParams> standard_robustness_variants(const MarketParams& base);

/// CSV export, header `A,B,mean_total,mean_price,mean_supply,std_error,n_failed`.
/// Failed cells emit nan columns. `comment_lines` are prefixed with "# ".
void write_surface_csv(std::ostream& out, const LossSurface& surface,
                       std::span<const std::string> comment_lines = {});

/// CSV export, header `lambda,A_star,B_star,mean_total`.
void write_frontier_csv(std::ostream& out, std::span<const FrontierPoint> frontier,
                        std::span<const std::string> comment_lines = {});

}  // namespace stablesim

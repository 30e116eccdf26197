#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablesim/types.hpp"

namespace stablesim {

/// One historical rebase observation.
struct RebaseRecord {
  std::int64_t timestamp = 0;  ///< Unix seconds, UTC
  double price = 0.0;
  double supply = 0.0;
};

/// Parse `YYYY-MM-DD[THH:MM:SS][Z]` (UTC) to Unix seconds.
/// Throws ParseError on any other shape.
std::int64_t parse_timestamp(std::string_view iso8601);

/// Canonical `YYYY-MM-DDTHH:MM:SSZ` form.
std::string format_timestamp(std::int64_t unix_seconds);

/// Read records from a CSV stream. The header line must be exactly
/// `timestamp,price,supply`; leading lines starting with '#' are skipped.
///
/// Throws ParseError (malformed line, carries the 1-based line number),
/// ValueError (non-positive price/supply), or OrderError (timestamps not
/// strictly increasing).
std::vector<RebaseRecord> load_history(std::istream& in);

/// As load_history, reading from a file path.
std::vector<RebaseRecord> load_history_file(const std::string& path);

/// CSV writer matching the load_history format exactly. Values use
/// shortest round-trip decimals, so written records re-load bit-identically.
void write_history_csv(std::ostream& out, std::span<const RebaseRecord> records);

/// Realized per-step series of a record set. All vectors are aligned with
/// the records; supply_change[0] is 0 and excluded from loss sums.
struct RealizedSeries {
  std::vector<double> price_dev;      ///< dP_t = (price_t - P*)/P*
  std::vector<double> supply_change;  ///< dS_t = (supply_t - supply_{t-1})/supply_{t-1}
  std::vector<double> market_cap;     ///< Y_t = price_t * supply_t
};

/// Throws TooFewRecordsError for fewer than two records.
RealizedSeries realized_series(std::span<const RebaseRecord> records,
                               double target_price = 1.0);

/// Loss of a realized series, summed over t = 1..n.
LossBreakdown series_loss(const RealizedSeries& series, const LossWeights& w);

/// Policy in force from a given time onward.
struct ScheduleEntry {
  std::int64_t effective_from;
  PolicyParams params;
};

/// Piecewise-constant policy over time. The first entry also covers any
/// earlier timestamps, so a single-entry schedule is a constant policy.
class PolicySchedule {
 public:
  explicit PolicySchedule(std::vector<ScheduleEntry> entries);
  explicit PolicySchedule(const PolicyParams& constant);

  const PolicyParams& at(std::int64_t timestamp) const;
  std::span<const ScheduleEntry> entries() const noexcept { return entries_; }

 private:
  std::vector<ScheduleEntry> entries_;
};

/// Schedule-aware variant of run_path: the supply step at time t applies
/// the policy in effect at timestamps[t]. With a single-entry schedule this
/// is exactly run_path. `target_price` sets the parity start (S_0 = Y_0/P*)
/// and the dP reference; each entry's own parameters drive the band trigger.
SimPath run_path_with_schedule(std::span<const double> cap_path,
                               std::span<const std::int64_t> timestamps,
                               const PolicySchedule& schedule, double target_price);

/// Historical loss versus a counterfactual replay under an alternative rule.
struct ReplayReport {
  RealizedSeries historical;
  LossBreakdown historical_loss;
  RealizedSeries counterfactual;
  LossBreakdown counterfactual_loss;
  std::vector<ScheduleEntry> counterfactual_policy;
};

/// Reconstruct the exogenous cap path Y_t = price_t * supply_t from the
/// records, rerun the rule under `schedule`, and compare losses. The
/// historical loss uses the recorded series as-is.
ReplayReport counterfactual_replay(std::span<const RebaseRecord> records,
                                   const PolicySchedule& schedule, const LossWeights& w,
                                   double target_price = 1.0);

ReplayReport counterfactual_replay(std::span<const RebaseRecord> records,
                                   const PolicyParams& p_alt, const LossWeights& w,
                                   double target_price = 1.0);

/// Series CSV dump. With a report: header `t,dP_hist,dS_hist,dP_cf,dS_cf`;
/// historical-only: header `t,dP_hist,dS_hist`.
void write_series_csv(std::ostream& out, const RealizedSeries& historical,
                      std::span<const std::string> comment_lines = {});
void write_series_csv(std::ostream& out, const ReplayReport& report,
                      std::span<const std::string> comment_lines = {});

/// The bundled synthetic history: 365 daily records from 2019-06-28,
/// market cap GBM (mu=0, sigma=0.05, Y0=1e8, seed 1907/0), rule A=0.05,
/// P*=1 with B=30 switching to B=10 as of 2019-10-30. Deterministic; the
/// committed data file is exactly this serialization.
std::vector<RebaseRecord> synthetic_ampl_history();

/// The schedule that generated synthetic_ampl_history.
PolicySchedule synthetic_ampl_schedule();

}  // namespace stablesim

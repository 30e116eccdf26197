#include "stablesim/histdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "stablesim/format.hpp"
#include "stablesim/gbm.hpp"
#include "stablesim/rebase.hpp"
#include "stablesim/simulate.hpp"

namespace stablesim {

namespace {

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool is_leap(std::int64_t y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

bool parse_uint(std::string_view s, unsigned& out) {
  if (s.empty()) return false;
  unsigned v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

[[noreturn]] void bad_timestamp(std::string_view s) {
  throw ParseError("bad timestamp '" + std::string(s) +
                       "', expected YYYY-MM-DD[THH:MM:SS][Z]",
                   0);
}

double parse_positive(std::string_view field, const char* name, std::int64_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || field.empty()) {
    throw ParseError(std::string("bad ") + name + " '" + std::string(field) + "'", line);
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValueError(std::string(name) + " must be > 0, got " + std::string(field), line);
  }
  return value;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view s) {
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  if (s.size() != 10 && s.size() != 19) bad_timestamp(s);

  unsigned year = 0, month = 0, day = 0;
  if (s[4] != '-' || s[7] != '-' || !parse_uint(s.substr(0, 4), year) ||
      !parse_uint(s.substr(5, 2), month) || !parse_uint(s.substr(8, 2), day)) {
    bad_timestamp(s);
  }
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) {
    bad_timestamp(s);
  }

  unsigned hh = 0, mm = 0, ss = 0;
  if (s.size() == 19) {
    if (s[10] != 'T' || s[13] != ':' || s[16] != ':' ||
        !parse_uint(s.substr(11, 2), hh) || !parse_uint(s.substr(14, 2), mm) ||
        !parse_uint(s.substr(17, 2), ss)) {
      bad_timestamp(s);
    }
    if (hh > 23 || mm > 59 || ss > 60) bad_timestamp(s);
  }

  return days_from_civil(year, month, day) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_timestamp(std::int64_t unix_seconds) {
  std::int64_t days = unix_seconds / 86400;
  std::int64_t rem = unix_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, y, m, d);

  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
  return buf;
}

std::vector<RebaseRecord> load_history(std::istream& in) {
  std::vector<RebaseRecord> records;
  std::string line;
  std::int64_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    if (!header_seen) {
      if (!line.empty() && line.front() == '#') continue;
      if (line != "timestamp,price,supply") {
        throw ParseError("expected header 'timestamp,price,supply', got '" + line + "'",
                         line_no);
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos) {
      throw ParseError("expected 3 comma-separated fields, got '" + line + "'", line_no);
    }

    RebaseRecord record;
    try {
      record.timestamp = parse_timestamp(std::string_view(line).substr(0, c1));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    record.price =
        parse_positive(std::string_view(line).substr(c1 + 1, c2 - c1 - 1), "price", line_no);
    record.supply = parse_positive(std::string_view(line).substr(c2 + 1), "supply", line_no);

    if (!records.empty() && record.timestamp <= records.back().timestamp) {
      throw OrderError("timestamps must be strictly increasing", line_no);
    }
    records.push_back(record);
  }

  if (!header_seen) {
    throw ParseError("empty input, expected header 'timestamp,price,supply'", 1);
  }
  return records;
}

std::vector<RebaseRecord> load_history_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'", 0);
  }
  return load_history(in);
}

void write_history_csv(std::ostream& out, std::span<const RebaseRecord> records) {
  out << "timestamp,price,supply\n";
  for (const RebaseRecord& r : records) {
    out << format_timestamp(r.timestamp) << ',' << format_double(r.price) << ','
        << format_double(r.supply) << '\n';
  }
}

RealizedSeries realized_series(std::span<const RebaseRecord> records, double target_price) {
  if (records.size() < 2) {
    throw TooFewRecordsError("need at least 2 records, got " +
                             std::to_string(records.size()));
  }
  if (!(target_price > 0.0) || !std::isfinite(target_price)) {
    throw InvalidParamError("P_star", "target price must be finite and > 0");
  }

  RealizedSeries series;
  const std::size_t n = records.size();
  series.price_dev.resize(n);
  series.supply_change.resize(n);
  series.market_cap.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    series.price_dev[t] = (records[t].price - target_price) / target_price;
    series.supply_change[t] =
        t == 0 ? 0.0
               : (records[t].supply - records[t - 1].supply) / records[t - 1].supply;
    series.market_cap[t] = records[t].price * records[t].supply;
  }
  return series;
}

LossBreakdown series_loss(const RealizedSeries& series, const LossWeights& w) {
  double price_component = 0.0;
  double supply_component = 0.0;
  for (std::size_t t = 1; t < series.price_dev.size(); ++t) {
    price_component += series.price_dev[t] * series.price_dev[t];
    supply_component += series.supply_change[t] * series.supply_change[t];
  }
  return combine_loss(price_component, supply_component, w);
}

PolicySchedule::PolicySchedule(std::vector<ScheduleEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw InvalidParamError("schedule", "schedule must contain at least one entry");
  }
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].effective_from <= entries_[i - 1].effective_from) {
      throw InvalidParamError("schedule",
                              "effective_from timestamps must be strictly increasing");
    }
  }
}

PolicySchedule::PolicySchedule(const PolicyParams& constant)
    : entries_{{std::numeric_limits<std::int64_t>::min(), constant}} {}

const PolicyParams& PolicySchedule::at(std::int64_t timestamp) const {
  // Last entry whose effective_from <= timestamp; the first entry also
  // covers earlier times.
  auto it = std::upper_bound(
      entries_.begin(), entries_.end(), timestamp,
      [](std::int64_t ts, const ScheduleEntry& e) { return ts < e.effective_from; });
  if (it == entries_.begin()) return entries_.front().params;
  return std::prev(it)->params;
}

SimPath run_path_with_schedule(std::span<const double> cap_path,
                               std::span<const std::int64_t> timestamps,
                               const PolicySchedule& schedule, double target_price) {
  if (cap_path.size() != timestamps.size()) {
    throw InvalidParamError("timestamps", "one timestamp per cap value required");
  }
  if (cap_path.empty()) {
    throw InvalidParamError("cap_path", "cap path must contain at least Y_0");
  }
  if (!(target_price > 0.0) || !std::isfinite(target_price)) {
    throw InvalidParamError("P_star", "target price must be finite and > 0");
  }
  for (double y : cap_path) {
    if (!(y > 0.0) || !std::isfinite(y)) {
      throw InvalidParamError("cap_path", "market cap values must be finite and > 0");
    }
  }

  const std::size_t n = cap_path.size() - 1;
  SimPath path;
  path.target_price = target_price;
  path.market_cap.assign(cap_path.begin(), cap_path.end());
  path.supply.resize(n + 1);
  path.price.resize(n + 1);
  path.price_dev.resize(n + 1);
  path.supply_change.resize(n + 1);

  path.supply[0] = cap_path[0] / target_price;
  path.price[0] = target_price;
  path.price_dev[0] = 0.0;
  path.supply_change[0] = 0.0;

  for (std::size_t t = 1; t <= n; ++t) {
    const PolicyParams& params = schedule.at(timestamps[t]);
    double supply = 0.0;
    try {
      supply = rebase_step(path.price[t - 1], path.supply[t - 1], params);
    } catch (const DegenerateSupplyError& e) {
      throw DegenerateSupplyError(e.what(), static_cast<std::int64_t>(t));
    }
    path.supply[t] = supply;
    path.price[t] = cap_path[t] / supply;
    path.price_dev[t] = (path.price[t] - target_price) / target_price;
    path.supply_change[t] = (supply - path.supply[t - 1]) / path.supply[t - 1];
  }
  return path;
}

ReplayReport counterfactual_replay(std::span<const RebaseRecord> records,
                                   const PolicySchedule& schedule, const LossWeights& w,
                                   double target_price) {
  RealizedSeries historical = realized_series(records, target_price);

  std::vector<std::int64_t> timestamps;
  timestamps.reserve(records.size());
  for (const RebaseRecord& r : records) timestamps.push_back(r.timestamp);

  const SimPath replayed =
      run_path_with_schedule(historical.market_cap, timestamps, schedule, target_price);

  ReplayReport report;
  report.historical_loss = series_loss(historical, w);
  report.historical = std::move(historical);
  report.counterfactual =
      RealizedSeries{replayed.price_dev, replayed.supply_change, replayed.market_cap};
  report.counterfactual_loss = series_loss(report.counterfactual, w);
  report.counterfactual_policy.assign(schedule.entries().begin(),
                                      schedule.entries().end());
  return report;
}

ReplayReport counterfactual_replay(std::span<const RebaseRecord> records,
                                   const PolicyParams& p_alt, const LossWeights& w,
                                   double target_price) {
  return counterfactual_replay(records, PolicySchedule(p_alt), w, target_price);
}

void write_series_csv(std::ostream& out, const RealizedSeries& historical,
                      std::span<const std::string> comment_lines) {
  for (const auto& line : comment_lines) out << "# " << line << '\n';
  out << "t,dP_hist,dS_hist\n";
  for (std::size_t t = 0; t < historical.price_dev.size(); ++t) {
    out << t << ',' << format_double(historical.price_dev[t]) << ','
        << format_double(historical.supply_change[t]) << '\n';
  }
}

void write_series_csv(std::ostream& out, const ReplayReport& report,
                      std::span<const std::string> comment_lines) {
  for (const auto& line : comment_lines) out << "# " << line << '\n';
  out << "t,dP_hist,dS_hist,dP_cf,dS_cf\n";
  for (std::size_t t = 0; t < report.historical.price_dev.size(); ++t) {
    out << t << ',' << format_double(report.historical.price_dev[t]) << ','
        << format_double(report.historical.supply_change[t]) << ','
        << format_double(report.counterfactual.price_dev[t]) << ','
        << format_double(report.counterfactual.supply_change[t]) << '\n';
  }
}

PolicySchedule synthetic_ampl_schedule() {
  const std::int64_t genesis = parse_timestamp("2019-06-28");
  const std::int64_t divisor_change = parse_timestamp("2019-10-30");
  return PolicySchedule(std::vector<ScheduleEntry>{
      {genesis, PolicyParams(0.05, 30.0, 1.0)},
      {divisor_change, PolicyParams(0.05, 10.0, 1.0)},
  });
}

std::vector<RebaseRecord> synthetic_ampl_history() {
  constexpr std::int64_t kDays = 365;
  const std::int64_t genesis = parse_timestamp("2019-06-28");

  const MarketParams market(0.0, 0.05, 100e6, kDays - 1);
  const auto caps = generate_cap_path(market, PathSeed{1907, 0});

  std::vector<std::int64_t> timestamps(kDays);
  for (std::int64_t i = 0; i < kDays; ++i) timestamps[i] = genesis + i * 86400;

  const SimPath path =
      run_path_with_schedule(caps, timestamps, synthetic_ampl_schedule(), 1.0);

  std::vector<RebaseRecord> records(kDays);
  for (std::int64_t i = 0; i < kDays; ++i) {
    const auto t = static_cast<std::size_t>(i);
    records[t] = RebaseRecord{timestamps[t], path.price[t], path.supply[t]};
  }
  return records;
}

}  // namespace stablesim

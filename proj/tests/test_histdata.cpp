#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "stablesim/gbm.hpp"
#include "stablesim/histdata.hpp"
#include "stablesim/simulate.hpp"

using namespace stablesim;

#ifndef STABLESIM_DATA_DIR
#define STABLESIM_DATA_DIR "."
#endif

namespace {
const std::string kFixturePath = std::string(STABLESIM_DATA_DIR) + "/ampl_synthetic.csv";
}

TEST_CASE("timestamp parse and format round-trip") {
  CHECK(parse_timestamp("1970-01-01") == 0);
  CHECK(parse_timestamp("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_timestamp("2019-06-28") == 1561680000);
  CHECK(parse_timestamp("2019-10-30T00:00:00Z") == 1572393600);
  CHECK(parse_timestamp("2019-10-30T12:34:56") == 1572393600 + 12 * 3600 + 34 * 60 + 56);

  CHECK(format_timestamp(0) == "1970-01-01T00:00:00Z");
  CHECK(format_timestamp(1572393600) == "2019-10-30T00:00:00Z");
  for (std::int64_t ts : {0LL, 1561680000LL, 1572439496LL, 951782400LL /* 2000-02-29 */}) {
    CHECK(parse_timestamp(format_timestamp(ts)) == ts);
  }
}

TEST_CASE("timestamp rejects malformed input") {
  for (const char* bad : {"2019/06/28", "2019-13-01", "2019-02-30", "2019-06-28T25:00:00",
                          "20190628", "2019-06-28T12:00", "not a date", ""}) {
    CHECK_THROWS_AS(parse_timestamp(bad), ParseError);
  }
  CHECK_NOTHROW(parse_timestamp("2020-02-29"));  // leap day
  CHECK_THROWS_AS(parse_timestamp("2019-02-29"), ParseError);
}

TEST_CASE("load_history reads a well-formed file") {
  std::istringstream in(
      "timestamp,price,supply\n"
      "2020-01-01T00:00:00Z,1.0,100\n"
      "2020-01-02T00:00:00Z,1.2,104\n"
      "2020-01-03T00:00:00Z,0.9,104\n");
  const auto records = load_history(in);
  REQUIRE(records.size() == 3);
  CHECK(records[0].price == 1.0);
  CHECK(records[1].supply == 104.0);
  CHECK(records[2].timestamp == parse_timestamp("2020-01-03"));
}

TEST_CASE("load_history tolerates comments, CRLF, and blank tail lines") {
  std::istringstream in(
      "# provenance line\r\n"
      "timestamp,price,supply\r\n"
      "2020-01-01,1.0,100\r\n"
      "2020-01-02,1.1,100\r\n"
      "\n");
  CHECK(load_history(in).size() == 2);
}

TEST_CASE("load_history errors carry line numbers") {
  SUBCASE("wrong header") {
    std::istringstream in("time,price,supply\n2020-01-01,1,100\n");
    try {
      load_history(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("zero supply") {
    std::istringstream in(
        "timestamp,price,supply\n"
        "2020-01-01,1.0,100\n"
        "2020-01-02,1.0,0\n");
    try {
      load_history(in);
      FAIL("expected ValueError");
    } catch (const ValueError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("negative price") {
    std::istringstream in("timestamp,price,supply\n2020-01-01,-1.0,100\n");
    CHECK_THROWS_AS(load_history(in), ValueError);
  }
  SUBCASE("unparseable number") {
    std::istringstream in("timestamp,price,supply\n2020-01-01,abc,100\n");
    try {
      load_history(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("wrong column count") {
    std::istringstream in("timestamp,price,supply\n2020-01-01,1.0\n");
    CHECK_THROWS_AS(load_history(in), ParseError);
  }
  SUBCASE("non-monotone timestamps") {
    std::istringstream in(
        "timestamp,price,supply\n"
        "2020-01-02,1.0,100\n"
        "2020-01-01,1.0,100\n");
    try {
      load_history(in);
      FAIL("expected OrderError");
    } catch (const OrderError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate timestamps") {
    std::istringstream in(
        "timestamp,price,supply\n"
        "2020-01-01,1.0,100\n"
        "2020-01-01,1.1,100\n");
    CHECK_THROWS_AS(load_history(in), OrderError);
  }
}

TEST_CASE("realized series arithmetic") {
  const std::vector<RebaseRecord> records{
      {parse_timestamp("2020-01-01"), 1.0, 100.0},
      {parse_timestamp("2020-01-02"), 1.2, 104.0},
  };
  const RealizedSeries series = realized_series(records);
  CHECK(series.price_dev[0] == 0.0);
  CHECK(series.price_dev[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(series.supply_change[0] == 0.0);
  CHECK(series.supply_change[1] == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(series.market_cap[1] == doctest::Approx(1.2 * 104.0).epsilon(1e-15));
}

TEST_CASE("constant records give an all-zero series") {
  const std::vector<RebaseRecord> records{
      {0, 1.0, 100.0}, {86400, 1.0, 100.0}, {172800, 1.0, 100.0}};
  const RealizedSeries series = realized_series(records);
  for (double v : series.price_dev) CHECK(v == 0.0);
  for (double v : series.supply_change) CHECK(v == 0.0);
  CHECK(series_loss(series, LossWeights(1.0)).total == 0.0);
}

TEST_CASE("too few records") {
  const std::vector<RebaseRecord> one{{0, 1.0, 100.0}};
  CHECK_THROWS_AS(realized_series(one), TooFewRecordsError);
}

TEST_CASE("history round-trips through CSV bit-identically") {
  const MarketParams m(0.0, 0.08, 1e8, 120);
  const auto cap = generate_cap_path(m, PathSeed{55, 0});
  const SimPath path = run_path(cap, PolicyParams(0.05, 5.0, 1.0));

  std::vector<RebaseRecord> records(cap.size());
  for (std::size_t t = 0; t < cap.size(); ++t) {
    records[t] = RebaseRecord{static_cast<std::int64_t>(t) * 86400, path.price[t],
                              path.supply[t]};
  }

  std::stringstream io;
  write_history_csv(io, records);
  const auto loaded = load_history(io);
  REQUIRE(loaded.size() == records.size());
  for (std::size_t t = 0; t < records.size(); ++t) {
    CHECK(loaded[t].price == records[t].price);
    CHECK(loaded[t].supply == records[t].supply);
  }

  const RealizedSeries series = realized_series(loaded);
  for (std::size_t t = 0; t < records.size(); ++t) {
    CHECK(series.price_dev[t] == path.price_dev[t]);
    CHECK(series.supply_change[t] == path.supply_change[t]);
  }
}

TEST_CASE("schedule lookup picks the entry in force") {
  const PolicySchedule schedule(std::vector<ScheduleEntry>{
      {100, PolicyParams(0.05, 30.0, 1.0)},
      {200, PolicyParams(0.05, 10.0, 1.0)},
  });
  CHECK(schedule.at(50).adjust_divisor == 30.0);   // before the first entry
  CHECK(schedule.at(100).adjust_divisor == 30.0);
  CHECK(schedule.at(199).adjust_divisor == 30.0);
  CHECK(schedule.at(200).adjust_divisor == 10.0);
  CHECK(schedule.at(1000).adjust_divisor == 10.0);

  CHECK_THROWS_AS(PolicySchedule(std::vector<ScheduleEntry>{}), InvalidParamError);
  CHECK_THROWS_AS(PolicySchedule(std::vector<ScheduleEntry>{
                      {200, PolicyParams(0.05, 30.0, 1.0)},
                      {100, PolicyParams(0.05, 10.0, 1.0)}}),
                  InvalidParamError);
}

TEST_CASE("schedule switch applies from its effective timestamp") {
  // B = 5 until t=2's timestamp, then B = 10.
  const std::vector<double> cap{100.0, 110.0, 110.0, 110.0};
  const std::vector<std::int64_t> ts{0, 86400, 172800, 259200};
  const PolicySchedule schedule(std::vector<ScheduleEntry>{
      {0, PolicyParams(0.05, 5.0, 1.0)},
      {172800, PolicyParams(0.05, 10.0, 1.0)},
  });
  const SimPath path = run_path_with_schedule(cap, ts, schedule, 1.0);

  CHECK(path.supply[1] == 100.0);  // in band at P_0
  // t=2 already under B=10: dS = 0.10/10
  CHECK(path.supply[2] == doctest::Approx(101.0).epsilon(1e-12));
  const double d2 = 110.0 / 101.0 - 1.0;
  CHECK(path.supply[3] == doctest::Approx(101.0 * (1.0 + d2 / 10.0)).epsilon(1e-12));
}

TEST_CASE("single-entry schedule equals run_path") {
  const MarketParams m(0.0, 0.1, 1e7, 50);
  const auto cap = generate_cap_path(m, PathSeed{99, 1});
  std::vector<std::int64_t> ts(cap.size());
  for (std::size_t t = 0; t < ts.size(); ++t) ts[t] = static_cast<std::int64_t>(t);

  const PolicyParams p(0.03, 4.0, 1.0);
  const SimPath direct = run_path(cap, p);
  const SimPath scheduled = run_path_with_schedule(cap, ts, PolicySchedule(p), 1.0);

  for (std::size_t t = 0; t < cap.size(); ++t) {
    CHECK(direct.supply[t] == scheduled.supply[t]);
    CHECK(direct.price[t] == scheduled.price[t]);
    CHECK(direct.price_dev[t] == scheduled.price_dev[t]);
    CHECK(direct.supply_change[t] == scheduled.supply_change[t]);
  }
}

TEST_CASE("bundled fixture matches its generator byte for byte") {
  std::ifstream in(kFixturePath, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "fixture not found: ", kFixturePath);
  std::stringstream file_bytes;
  file_bytes << in.rdbuf();

  std::ostringstream regenerated;
  write_history_csv(regenerated, synthetic_ampl_history());
  CHECK(file_bytes.str() == regenerated.str());
}

TEST_CASE("bundled fixture loads and shows the documented regime") {
  const auto records = load_history_file(kFixturePath);
  REQUIRE(records.size() == 365);
  CHECK(records.front().timestamp == parse_timestamp("2019-06-28"));
  CHECK(records.front().price == 1.0);
  CHECK(records.front().supply == 100e6);

  // Price deviations dominate supply volatility under the wide divisors.
  const RealizedSeries series = realized_series(records);
  const LossBreakdown loss = series_loss(series, LossWeights(1.0));
  CHECK(loss.price_component == doctest::Approx(7.2761760163085798).epsilon(1e-9));
  CHECK(loss.supply_component == doctest::Approx(0.039406153564973748).epsilon(1e-9));
  CHECK(loss.price_component > loss.supply_component);
}

TEST_CASE("replay with the generating schedule is a fixed point") {
  const auto records = load_history_file(kFixturePath);
  const ReplayReport report =
      counterfactual_replay(records, synthetic_ampl_schedule(), LossWeights(1.0));

  REQUIRE(report.counterfactual.price_dev.size() == records.size());
  for (std::size_t t = 0; t < records.size(); ++t) {
    CHECK(report.counterfactual.price_dev[t] ==
          doctest::Approx(report.historical.price_dev[t]).epsilon(1e-9));
    CHECK(report.counterfactual.supply_change[t] ==
          doctest::Approx(report.historical.supply_change[t]).epsilon(1e-9));
  }
  CHECK(report.counterfactual_loss.total ==
        doctest::Approx(report.historical_loss.total).epsilon(1e-9));
}

TEST_CASE("a smaller divisor buys price stability on the fixture") {
  const auto records = load_history_file(kFixturePath);
  const ReplayReport report =
      counterfactual_replay(records, PolicyParams(0.05, 10.0, 1.0), LossWeights(1.0));
  CHECK(report.counterfactual_loss.price_component <
        report.historical_loss.price_component);
  // the flip side: supply moves more
  CHECK(report.counterfactual_loss.supply_component >
        report.historical_loss.supply_component);
}

TEST_CASE("replay smoke with an arbitrary policy") {
  const auto records = load_history_file(kFixturePath);
  const ReplayReport report =
      counterfactual_replay(records, PolicyParams(0.05, 10.0, 1.0), LossWeights(1.0));
  CHECK(report.historical_loss.total > 0.0);
  CHECK(report.counterfactual_loss.total > 0.0);
  REQUIRE(report.counterfactual_policy.size() == 1);
  CHECK(report.counterfactual_policy[0].params.adjust_divisor == 10.0);

  std::ostringstream csv;
  write_series_csv(csv, report);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,dP_hist,dS_hist,dP_cf,dS_cf");
}

TEST_CASE("cap-path reconstruction is price times supply") {
  const std::vector<RebaseRecord> records{
      {0, 1.1, 100.0}, {86400, 0.9, 102.0}, {172800, 1.0, 101.0}};
  const RealizedSeries series = realized_series(records);
  for (std::size_t t = 0; t < records.size(); ++t) {
    CHECK(series.market_cap[t] == records[t].price * records[t].supply);
  }
}

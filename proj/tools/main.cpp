// stablesim command-line front end: simulate | sweep | frontier | robustness | replay.
// All data outputs are CSV/JSON with full provenance; plotting is left to
// external tooling.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stablesim/errors.hpp"
#include "stablesim/format.hpp"
#include "stablesim/gbm.hpp"
#include "stablesim/histdata.hpp"
#include "stablesim/montecarlo.hpp"
#include "stablesim/simulate.hpp"
#include "stablesim/sweep.hpp"
#include "stablesim/types.hpp"
#include "stablesim/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace stablesim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Flat JSON config files: {"sigma": 0.05, "lambdas": [0.5, 10], ...}.
// Keys are long option names without the leading dashes. A key fills its
// option only when the flag was not given on the command line, so flags
// always override the file. Unknown keys are an error.
class ConfigMerger {
 public:
  ConfigMerger(const CLI::App& cmd, const std::string& path) : cmd_(cmd) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw InvalidParamError("config", "cannot open '" + path + "'");
    try {
      in >> doc_;
    } catch (const nlohmann::json::exception& e) {
      throw InvalidParamError("config", "'" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc_.is_object()) {
      throw InvalidParamError("config", "'" + path + "' must be a flat JSON object");
    }
  }

  template <typename T>
  bool merge(const std::string& key, T& field) {
    if (!doc_.is_object() || !doc_.contains(key)) return false;
    consumed_.push_back(key);
    if (flag_given(key)) return false;
    assign(key, doc_.at(key), field);
    return true;
  }

  // Every config key must have been offered to merge(); leftovers are typos.
  void finish() const {
    if (!doc_.is_object()) return;
    for (const auto& [key, value] : doc_.items()) {
      (void)value;
      if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end()) {
        throw InvalidParamError("config", "unknown key '" + key + "'");
      }
    }
  }

 private:
  bool flag_given(const std::string& key) const {
    const CLI::Option* opt = cmd_.get_option_no_throw("--" + key);
    return opt != nullptr && opt->count() > 0;
  }

  [[noreturn]] static void type_error(const std::string& key, const char* want) {
    throw InvalidParamError("config", "key '" + key + "' must be " + want);
  }

  static void assign(const std::string& key, const nlohmann::json& v, double& field) {
    if (!v.is_number()) type_error(key, "a number");
    field = v.get<double>();
  }
  static void assign(const std::string& key, const nlohmann::json& v, std::int64_t& field) {
    if (!v.is_number_integer()) type_error(key, "an integer");
    field = v.get<std::int64_t>();
  }
  static void assign(const std::string& key, const nlohmann::json& v, unsigned& field) {
    if (!v.is_number_unsigned()) type_error(key, "a non-negative integer");
    field = v.get<unsigned>();
  }
  static void assign(const std::string& key, const nlohmann::json& v, std::uint64_t& field) {
    // Strings are accepted so 64-bit seeds survive JSON's double-backed numbers.
    if (v.is_string()) {
      try {
        field = std::stoull(v.get<std::string>());
        return;
      } catch (const std::exception&) {
        type_error(key, "an unsigned integer");
      }
    }
    if (!v.is_number_unsigned()) type_error(key, "an unsigned integer");
    field = v.get<std::uint64_t>();
  }
  static void assign(const std::string& key, const nlohmann::json& v, bool& field) {
    if (!v.is_boolean()) type_error(key, "a boolean");
    field = v.get<bool>();
  }
  static void assign(const std::string& key, const nlohmann::json& v, std::string& field) {
    if (!v.is_string()) type_error(key, "a string");
    field = v.get<std::string>();
  }
  static void assign(const std::string& key, const nlohmann::json& v,
                     std::vector<double>& field) {
    if (!v.is_array()) type_error(key, "an array of numbers");
    std::vector<double> values;
    for (const auto& element : v) {
      if (!element.is_number()) type_error(key, "an array of numbers");
      values.push_back(element.get<double>());
    }
    field = std::move(values);
  }

  const CLI::App& cmd_;
  nlohmann::json doc_;
  std::vector<std::string> consumed_;
};

// Ordered key/value provenance recorded into every output file. Worker count
// and output paths are deliberately absent: they never affect the data, so
// files stay byte-identical across them.
class Provenance {
 public:
  explicit Provenance(std::string command) : command_(std::move(command)) {}

  void add(const std::string& key, double value) { kv_.emplace_back(key, format_double(value)); }
  void add(const std::string& key, std::int64_t value) { kv_.emplace_back(key, std::to_string(value)); }
  void add(const std::string& key, std::uint64_t value) { kv_.emplace_back(key, std::to_string(value)); }
  void add(const std::string& key, const std::string& value) { kv_.emplace_back(key, value); }
  void add(const std::string& key, std::span<const double> values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) joined += ',';
      joined += format_double(values[i]);
    }
    kv_.emplace_back(key, joined);
  }

  std::vector<std::string> comment_lines() const {
    std::vector<std::string> lines;
    lines.push_back(std::string("stablesim ") + kVersion);
    lines.push_back("command: " + command_);
    for (const auto& [k, v] : kv_) lines.push_back(k + "=" + v);
    return lines;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["version"] = kVersion;
    j["command"] = command_;
    for (const auto& [k, v] : kv_) j[k] = v;
    return j;
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> kv_;
};

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw Error("failed while writing '" + path + "'");
}

ordered_json loss_json(const LossBreakdown& loss, double lambda) {
  ordered_json j;
  j["price_component"] = loss.price_component;
  j["supply_component"] = loss.supply_component;
  j["lambda"] = lambda;
  j["total"] = loss.total;
  return j;
}

// ---------------------------------------------------------------------------
// shared option bundles

struct MarketOpts {
  double sigma = 0.05;
  double mu = 0.0;
  double y0 = 100e6;
  std::int64_t n = 100;

  void attach(CLI::App& cmd) {
    cmd.add_option("--sigma", sigma, "per-step log volatility of the market cap");
    cmd.add_option("--mu", mu, "per-step log drift of the market cap");
    cmd.add_option("--y0", y0, "initial market cap");
    cmd.add_option("--n", n, "number of steps");
  }

  void merge(ConfigMerger& cfg) {
    cfg.merge("sigma", sigma);
    cfg.merge("mu", mu);
    cfg.merge("y0", y0);
    cfg.merge("n", n);
  }

  MarketParams params() const { return MarketParams(mu, sigma, y0, n); }

  void record(Provenance& prov) const {
    prov.add("sigma", sigma);
    prov.add("mu", mu);
    prov.add("y0", y0);
    prov.add("n", n);
  }
};

struct GridOpts {
  double a_min = 0.0, a_max = 0.10, a_step = 0.01;
  double b_min = 1.0, b_max = 10.0, b_step = 0.5;

  void attach(CLI::App& cmd) {
    cmd.add_option("--a-min", a_min, "smallest band halfwidth A");
    cmd.add_option("--a-max", a_max, "largest band halfwidth A");
    cmd.add_option("--a-step", a_step, "A grid step");
    cmd.add_option("--b-min", b_min, "smallest adjust divisor B");
    cmd.add_option("--b-max", b_max, "largest adjust divisor B");
    cmd.add_option("--b-step", b_step, "B grid step");
  }

  void merge(ConfigMerger& cfg) {
    cfg.merge("a-min", a_min);
    cfg.merge("a-max", a_max);
    cfg.merge("a-step", a_step);
    cfg.merge("b-min", b_min);
    cfg.merge("b-max", b_max);
    cfg.merge("b-step", b_step);
  }

  GridSpec spec() const {
    return GridSpec(grid_axis(a_min, a_max, a_step), grid_axis(b_min, b_max, b_step));
  }

  void record(Provenance& prov) const {
    prov.add("a_min", a_min);
    prov.add("a_max", a_max);
    prov.add("a_step", a_step);
    prov.add("b_min", b_min);
    prov.add("b_max", b_max);
    prov.add("b_step", b_step);
  }
};

struct RunOpts {
  std::uint64_t seed = 0;
  bool strict = false;
  unsigned workers = 0;
  bool seed_from_config = false;
  CLI::Option* seed_option = nullptr;

  void attach(CLI::App& cmd) {
    seed_option = cmd.add_option("--seed", seed, "master seed; all randomness flows from it");
    cmd.add_flag("--strict", strict, "fail instead of drawing a seed when --seed is omitted");
    cmd.add_option("--workers", workers, "worker threads (0 = hardware); never affects results");
  }

  void merge(ConfigMerger& cfg) {
    seed_from_config = cfg.merge("seed", seed) || seed_from_config;
    cfg.merge("strict", strict);
    cfg.merge("workers", workers);
  }

  // Resolves the master seed: explicit wins; otherwise strict mode errors and
  // non-strict draws one and prints it so the run stays reproducible.
  std::uint64_t resolve_seed() {
    if (seed_from_config || (seed_option != nullptr && seed_option->count() > 0)) {
      return seed;
    }
    if (strict) {
      throw InvalidParamError("seed", "--strict requires an explicit --seed");
    }
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed=" << seed << " (drawn; pass --seed " << seed << " to reproduce)\n";
    return seed;
  }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateCmd {
  MarketOpts market;
  RunOpts run;
  double a = 0.05, b = 5.0, p_star = 1.0, lambda = 1.0;
  std::string out_csv = "path.csv";
  std::string out_json = "loss.json";
  std::string config_path;
  CLI::App* app = nullptr;

  void attach(CLI::App& cmd) {
    app = &cmd;
    market.attach(cmd);
    cmd.add_option("--a", a, "band halfwidth A");
    cmd.add_option("--b", b, "adjust divisor B");
    cmd.add_option("--p-star", p_star, "target price P*");
    cmd.add_option("--lambda", lambda, "weight on squared supply change");
    run.attach(cmd);
    cmd.add_option("--out-csv", out_csv, "per-path series output");
    cmd.add_option("--out-json", out_json, "loss breakdown output");
    cmd.add_option("--config", config_path, "flat JSON config; flags override it");
  }

  int execute() {
    ConfigMerger cfg(*app, config_path);
    market.merge(cfg);
    cfg.merge("a", a);
    cfg.merge("b", b);
    cfg.merge("p-star", p_star);
    cfg.merge("lambda", lambda);
    run.merge(cfg);
    cfg.merge("out-csv", out_csv);
    cfg.merge("out-json", out_json);
    cfg.finish();

    const MarketParams m = market.params();
    const PolicyParams policy(a, b, p_star);
    const LossWeights weights(lambda);
    const std::uint64_t master_seed = run.resolve_seed();

    const auto cap = generate_cap_path(m, PathSeed{master_seed, 0});
    const SimPath path = run_path(cap, policy);
    const LossBreakdown loss = path_loss(path, weights);

    Provenance prov("simulate");
    market.record(prov);
    prov.add("a", a);
    prov.add("b", b);
    prov.add("p_star", p_star);
    prov.add("lambda", lambda);
    prov.add("seed", master_seed);
    prov.add("path_index", std::int64_t{0});

    std::ostringstream csv;
    write_path_csv(csv, path, prov.comment_lines());
    write_text_file(out_csv, csv.str());

    ordered_json j;
    j["loss"] = loss_json(loss, lambda);
    j["provenance"] = prov.to_json();
    write_text_file(out_json, j.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// sweep

struct SweepCmd {
  MarketOpts market;
  GridOpts grid;
  RunOpts run;
  double lambda = 1.0, p_star = 1.0;
  std::int64_t n_paths = 200;
  std::vector<double> lambdas;
  std::string out_csv = "surface.csv";
  std::string out_frontier = "frontier.csv";
  std::string config_path;
  CLI::App* app = nullptr;

  void attach(CLI::App& cmd) {
    app = &cmd;
    market.attach(cmd);
    grid.attach(cmd);
    cmd.add_option("--lambda", lambda, "weight used for the surface");
    cmd.add_option("--p-star", p_star, "target price P*");
    cmd.add_option("--n-paths", n_paths, "Monte Carlo paths per grid cell");
    cmd.add_option("--lambdas", lambdas, "also emit the optimal-policy frontier for these weights")
        ->delimiter(',');
    run.attach(cmd);
    cmd.add_option("--out-csv", out_csv, "loss surface output");
    cmd.add_option("--out-frontier", out_frontier, "frontier output (with --lambdas)");
    cmd.add_option("--config", config_path, "flat JSON config; flags override it");
  }

  int execute() {
    ConfigMerger cfg(*app, config_path);
    market.merge(cfg);
    grid.merge(cfg);
    cfg.merge("lambda", lambda);
    cfg.merge("p-star", p_star);
    cfg.merge("n-paths", n_paths);
    cfg.merge("lambdas", lambdas);
    run.merge(cfg);
    cfg.merge("out-csv", out_csv);
    cfg.merge("out-frontier", out_frontier);
    cfg.finish();

    const MarketParams m = market.params();
    const GridSpec g = grid.spec();
    const LossWeights weights(lambda);
    const std::uint64_t master_seed = run.resolve_seed();

    std::cerr << "sweep: " << g.a_values.size() << "x" << g.b_values.size() << " grid, "
              << n_paths << " paths per cell\n";
    const LossSurface surface =
        sweep_grid(m, g, weights, n_paths, master_seed, p_star, run.workers);

    Provenance prov("sweep");
    market.record(prov);
    grid.record(prov);
    prov.add("lambda", lambda);
    prov.add("p_star", p_star);
    prov.add("n_paths", n_paths);
    prov.add("seed", master_seed);

    std::ostringstream csv;
    write_surface_csv(csv, surface, prov.comment_lines());
    write_text_file(out_csv, csv.str());

    if (!lambdas.empty()) {
      const auto frontier =
          lambda_frontier(m, g, lambdas, n_paths, master_seed, p_star, run.workers);
      Provenance fp("sweep.frontier");
      market.record(fp);
      grid.record(fp);
      fp.add("lambdas", std::span<const double>(lambdas));
      fp.add("p_star", p_star);
      fp.add("n_paths", n_paths);
      fp.add("seed", master_seed);
      std::ostringstream fcsv;
      write_frontier_csv(fcsv, frontier, fp.comment_lines());
      write_text_file(out_frontier, fcsv.str());
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// frontier

struct FrontierCmd {
  MarketOpts market;
  GridOpts grid;
  RunOpts run;
  double p_star = 1.0;
  std::int64_t n_paths = 200;
  std::vector<double> lambdas{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::string out_csv = "frontier.csv";
  std::string config_path;
  CLI::App* app = nullptr;

  void attach(CLI::App& cmd) {
    app = &cmd;
    market.attach(cmd);
    grid.attach(cmd);
    cmd.add_option("--lambdas", lambdas, "weights to trace the optimal policy over")
        ->delimiter(',');
    cmd.add_option("--p-star", p_star, "target price P*");
    cmd.add_option("--n-paths", n_paths, "Monte Carlo paths per grid cell");
    run.attach(cmd);
    cmd.add_option("--out-csv", out_csv, "frontier output");
    cmd.add_option("--config", config_path, "flat JSON config; flags override it");
  }

  int execute() {
    ConfigMerger cfg(*app, config_path);
    market.merge(cfg);
    grid.merge(cfg);
    cfg.merge("lambdas", lambdas);
    cfg.merge("p-star", p_star);
    cfg.merge("n-paths", n_paths);
    run.merge(cfg);
    cfg.merge("out-csv", out_csv);
    cfg.finish();

    const MarketParams m = market.params();
    const GridSpec g = grid.spec();
    const std::uint64_t master_seed = run.resolve_seed();

    const auto frontier =
        lambda_frontier(m, g, lambdas, n_paths, master_seed, p_star, run.workers);

    Provenance prov("frontier");
    market.record(prov);
    grid.record(prov);
    prov.add("lambdas", std::span<const double>(lambdas));
    prov.add("p_star", p_star);
    prov.add("n_paths", n_paths);
    prov.add("seed", master_seed);

    std::ostringstream csv;
    write_frontier_csv(csv, frontier, prov.comment_lines());
    write_text_file(out_csv, csv.str());
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// robustness

struct RobustnessCmd {
  MarketOpts market;
  GridOpts grid;
  RunOpts run;
  double lambda = 1.0, p_star = 1.0, monotonicity_b = 5.0;
  std::int64_t n_paths = 200;
  std::vector<double> lambdas{0.5, 10.0};
  std::string out_dir = ".";
  std::string config_path;
  CLI::App* app = nullptr;

  void attach(CLI::App& cmd) {
    app = &cmd;
    market.attach(cmd);
    grid.attach(cmd);
    cmd.add_option("--lambda", lambda, "weight for the per-variant surfaces");
    cmd.add_option("--lambdas", lambdas, "weights for the per-variant frontiers")
        ->delimiter(',');
    cmd.add_option("--monotonicity-b", monotonicity_b, "B slice for the loss-vs-A statistic");
    cmd.add_option("--p-star", p_star, "target price P*");
    cmd.add_option("--n-paths", n_paths, "Monte Carlo paths per grid cell");
    run.attach(cmd);
    cmd.add_option("--out-dir", out_dir, "directory for per-variant outputs");
    cmd.add_option("--config", config_path, "flat JSON config; flags override it");
  }

  int execute() {
    ConfigMerger cfg(*app, config_path);
    market.merge(cfg);
    grid.merge(cfg);
    cfg.merge("lambda", lambda);
    cfg.merge("lambdas", lambdas);
    cfg.merge("monotonicity-b", monotonicity_b);
    cfg.merge("p-star", p_star);
    cfg.merge("n-paths", n_paths);
    run.merge(cfg);
    cfg.merge("out-dir", out_dir);
    cfg.finish();

    const MarketParams base = market.params();
    const GridSpec g = grid.spec();
    const std::uint64_t master_seed = run.resolve_seed();

    const auto variants = standard_robustness_variants(base);
    static const char* kLabels[] = {"drift_up", "drift_down", "vol_high"};

    SweepConfig config{base,   g,         LossWeights(lambda), n_paths,
                       master_seed, p_star, run.workers,       monotonicity_b,
                       lambdas};
    const auto reports = robustness_battery(config, variants);

    ordered_json summary;
    summary["variants"] = ordered_json::array();

    for (std::size_t i = 0; i < variants.size(); ++i) {
      const MarketParams& variant = variants[i];
      std::cerr << "robustness: variant " << kLabels[i] << " (mu=" << variant.drift
                << ", sigma=" << variant.volatility << ")\n";

      Provenance prov(std::string("robustness.") + kLabels[i]);
      prov.add("sigma", variant.volatility);
      prov.add("mu", variant.drift);
      prov.add("y0", variant.initial_cap);
      prov.add("n", variant.horizon);
      grid.record(prov);
      prov.add("lambda", lambda);
      prov.add("p_star", p_star);
      prov.add("n_paths", n_paths);
      prov.add("seed", master_seed);

      const LossSurface surface = sweep_grid(variant, g, LossWeights(lambda), n_paths,
                                             master_seed, p_star, run.workers);
      std::ostringstream csv;
      write_surface_csv(csv, surface, prov.comment_lines());
      write_text_file(out_dir + "/surface_" + kLabels[i] + ".csv", csv.str());

      ordered_json vj;
      vj["label"] = kLabels[i];
      vj["mu"] = variant.drift;
      vj["sigma"] = variant.volatility;
      vj["spearman_in_a"] = reports[i].spearman_in_a;
      vj["monotonicity_b"] = monotonicity_b;
      vj["frontier"] = ordered_json::array();
      for (const FrontierPoint& point : reports[i].frontier) {
        ordered_json fj;
        fj["lambda"] = point.lambda;
        fj["a_star"] = point.band_halfwidth;
        fj["b_star"] = point.adjust_divisor;
        fj["mean_total"] = point.estimate.mean_total;
        vj["frontier"].push_back(fj);
      }
      summary["variants"].push_back(vj);
    }

    Provenance prov("robustness");
    market.record(prov);
    grid.record(prov);
    prov.add("lambda", lambda);
    prov.add("lambdas", std::span<const double>(lambdas));
    prov.add("monotonicity_b", monotonicity_b);
    prov.add("p_star", p_star);
    prov.add("n_paths", n_paths);
    prov.add("seed", master_seed);
    summary["provenance"] = prov.to_json();
    write_text_file(out_dir + "/robustness.json", summary.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// replay

struct ReplayCmd {
  std::string history_path;
  double a = 0.0, b = 0.0, p_star = 1.0, lambda = 1.0;
  std::string schedule_path;
  std::string out_json = "report.json";
  std::string out_csv = "series.csv";
  std::string config_path;
  CLI::App* app = nullptr;
  CLI::Option* a_option = nullptr;
  CLI::Option* b_option = nullptr;
  bool a_from_config = false;
  bool b_from_config = false;

  void attach(CLI::App& cmd) {
    app = &cmd;
    cmd.add_option("history", history_path, "rebase history CSV (timestamp,price,supply)")
        ->required();
    a_option = cmd.add_option("--a", a, "counterfactual band halfwidth A");
    b_option = cmd.add_option("--b", b, "counterfactual adjust divisor B");
    cmd.add_option("--p-star", p_star, "target price P* (loss reference and policy target)");
    cmd.add_option("--lambda", lambda, "weight on squared supply change");
    cmd.add_option("--schedule", schedule_path,
                   "JSON schedule of {from, a, b[, p_star]} counterfactual policies");
    cmd.add_option("--out-json", out_json, "replay report output");
    cmd.add_option("--out-csv", out_csv, "series output");
    cmd.add_option("--config", config_path, "flat JSON config; flags override it");
  }

  PolicySchedule load_schedule() const {
    std::ifstream in(schedule_path);
    if (!in) throw ParseError("cannot open '" + schedule_path + "'", 0);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("schedule is not valid JSON: " + std::string(e.what()), 0);
    }
    if (!doc.is_array() || doc.empty()) {
      throw ParseError("schedule must be a non-empty JSON array", 0);
    }
    std::vector<ScheduleEntry> entries;
    for (const auto& item : doc) {
      if (!item.is_object() || !item.contains("from") || !item.contains("a") ||
          !item.contains("b")) {
        throw ParseError("each schedule entry needs from, a, b", 0);
      }
      const auto from = parse_timestamp(item.at("from").get<std::string>());
      const double entry_p_star = item.value("p_star", p_star);
      entries.push_back(ScheduleEntry{
          from, PolicyParams(item.at("a").get<double>(), item.at("b").get<double>(),
                             entry_p_star)});
    }
    return PolicySchedule(std::move(entries));
  }

  int execute() {
    ConfigMerger cfg(*app, config_path);
    a_from_config = cfg.merge("a", a);
    b_from_config = cfg.merge("b", b);
    cfg.merge("p-star", p_star);
    cfg.merge("lambda", lambda);
    cfg.merge("schedule", schedule_path);
    cfg.merge("out-json", out_json);
    cfg.merge("out-csv", out_csv);
    cfg.finish();

    const bool a_given = a_option->count() > 0 || a_from_config;
    const bool b_given = b_option->count() > 0 || b_from_config;
    const bool have_policy = a_given || b_given;
    if (have_policy && !schedule_path.empty()) {
      throw InvalidParamError("schedule", "--schedule cannot be combined with --a/--b");
    }
    if (have_policy && (!a_given || !b_given)) {
      throw InvalidParamError(!a_given ? "A" : "B",
                              "counterfactual policy needs both --a and --b");
    }

    const auto records = load_history_file(history_path);
    const LossWeights weights(lambda);

    Provenance prov("replay");
    prov.add("history", history_path);
    prov.add("records", static_cast<std::int64_t>(records.size()));
    prov.add("p_star", p_star);
    prov.add("lambda", lambda);

    ordered_json j;

    if (!have_policy && schedule_path.empty()) {
      // Historical series and loss only.
      const RealizedSeries series = realized_series(records, p_star);
      const LossBreakdown loss = series_loss(series, weights);

      std::ostringstream csv;
      write_series_csv(csv, series, prov.comment_lines());
      write_text_file(out_csv, csv.str());

      j["historical"]["loss"] = loss_json(loss, lambda);
      j["historical"]["dP"] = series.price_dev;
      j["historical"]["dS"] = series.supply_change;
      j["provenance"] = prov.to_json();
      write_text_file(out_json, j.dump(2) + "\n");
      return kExitOk;
    }

    PolicySchedule schedule = schedule_path.empty()
                                  ? PolicySchedule(PolicyParams(a, b, p_star))
                                  : load_schedule();
    if (schedule_path.empty()) {
      prov.add("a", a);
      prov.add("b", b);
    } else {
      prov.add("schedule", schedule_path);
    }

    const ReplayReport report = counterfactual_replay(records, schedule, weights, p_star);

    std::ostringstream csv;
    write_series_csv(csv, report, prov.comment_lines());
    write_text_file(out_csv, csv.str());

    j["historical"]["loss"] = loss_json(report.historical_loss, lambda);
    j["historical"]["dP"] = report.historical.price_dev;
    j["historical"]["dS"] = report.historical.supply_change;
    j["counterfactual"]["policy"] = ordered_json::array();
    for (const ScheduleEntry& entry : report.counterfactual_policy) {
      ordered_json ej;
      ej["from"] = entry.effective_from == std::numeric_limits<std::int64_t>::min()
                       ? "beginning"
                       : format_timestamp(entry.effective_from);
      ej["a"] = entry.params.band_halfwidth;
      ej["b"] = entry.params.adjust_divisor;
      ej["p_star"] = entry.params.target_price;
      j["counterfactual"]["policy"].push_back(ej);
    }
    j["counterfactual"]["loss"] = loss_json(report.counterfactual_loss, lambda);
    j["counterfactual"]["dP"] = report.counterfactual.price_dev;
    j["counterfactual"]["dS"] = report.counterfactual.supply_change;
    j["provenance"] = prov.to_json();
    write_text_file(out_json, j.dump(2) + "\n");
    return kExitOk;
  }
};

template <typename Cmd>
int guarded(Cmd& cmd) {
  try {
    return cmd.execute();
  } catch (const InvalidParamError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const HistoryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TooFewRecordsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator and policy optimizer for rebasing stablecoins"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("stablesim ") + kVersion);

  SimulateCmd simulate_cmd;
  auto* simulate_app = app.add_subcommand(
      "simulate", "simulate one market path under a rebase rule; emit series CSV + loss JSON");
  simulate_cmd.attach(*simulate_app);

  SweepCmd sweep_cmd;
  auto* sweep_app = app.add_subcommand(
      "sweep", "estimate the expected loss over an (A, B) grid; emit surface CSV");
  sweep_cmd.attach(*sweep_app);

  FrontierCmd frontier_cmd;
  auto* frontier_app = app.add_subcommand(
      "frontier", "trace the optimal (A*, B*) as the supply weight lambda varies");
  frontier_cmd.attach(*frontier_app);

  RobustnessCmd robustness_cmd;
  auto* robustness_app = app.add_subcommand(
      "robustness", "rerun the sweep and frontier under drift/volatility variants");
  robustness_cmd.attach(*robustness_app);

  ReplayCmd replay_cmd;
  auto* replay_app = app.add_subcommand(
      "replay", "compute realized losses from a rebase history and replay counterfactuals");
  replay_cmd.attach(*replay_app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (simulate_app->parsed()) return guarded(simulate_cmd);
  if (sweep_app->parsed()) return guarded(sweep_cmd);
  if (frontier_app->parsed()) return guarded(frontier_cmd);
  if (robustness_app->parsed()) return guarded(robustness_cmd);
  if (replay_app->parsed()) return guarded(replay_cmd);
  return kExitConfig;
}

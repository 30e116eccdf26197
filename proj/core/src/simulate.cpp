#include "stablesim/simulate.hpp"

#include <cmath>
#include <ostream>

#include "stablesim/format.hpp"
#include "stablesim/rebase.hpp"

namespace stablesim {

SimPath run_path(std::span<const double> cap_path, const PolicyParams& p) {
  if (cap_path.empty()) {
    throw InvalidParamError("cap_path", "cap path must contain at least Y_0");
  }
  for (double y : cap_path) {
    if (!(y > 0.0) || !std::isfinite(y)) {
      throw InvalidParamError("cap_path", "market cap values must be finite and > 0");
    }
  }

  const std::size_t n = cap_path.size() - 1;
  SimPath path;
  path.target_price = p.target_price;
  path.market_cap.assign(cap_path.begin(), cap_path.end());
  path.supply.resize(n + 1);
  path.price.resize(n + 1);
  path.price_dev.resize(n + 1);
  path.supply_change.resize(n + 1);

  path.supply[0] = cap_path[0] / p.target_price;
  path.price[0] = p.target_price;  // parity start: dP_0 = 0 by construction
  path.price_dev[0] = 0.0;
  path.supply_change[0] = 0.0;     // dS_0 undefined; excluded from every sum

  for (std::size_t t = 1; t <= n; ++t) {
    double supply = 0.0;
    try {
      supply = rebase_step(path.price[t - 1], path.supply[t - 1], p);
    } catch (const DegenerateSupplyError& e) {
      throw DegenerateSupplyError(e.what(), static_cast<std::int64_t>(t));
    }
    path.supply[t] = supply;
    path.price[t] = cap_path[t] / supply;
    path.price_dev[t] = (path.price[t] - p.target_price) / p.target_price;
    path.supply_change[t] = (supply - path.supply[t - 1]) / path.supply[t - 1];
  }
  return path;
}

LossBreakdown path_loss(const SimPath& path, const LossWeights& w) {
  double price_component = 0.0;
  double supply_component = 0.0;
  const std::int64_t n = path.steps();
  for (std::int64_t t = 1; t <= n; ++t) {
    const double dp = path.price_dev[static_cast<std::size_t>(t)];
    const double ds = path.supply_change[static_cast<std::size_t>(t)];
    price_component += dp * dp;
    supply_component += ds * ds;
  }
  return combine_loss(price_component, supply_component, w);
}

void write_path_csv(std::ostream& out, const SimPath& path,
                    std::span<const std::string> comment_lines) {
  for (const auto& line : comment_lines) {
    out << "# " << line << '\n';
  }
  out << "t,Y,S,P,dP,dS\n";
  const std::int64_t n = path.steps();
  for (std::int64_t t = 0; t <= n; ++t) {
    const auto i = static_cast<std::size_t>(t);
    out << t << ',' << format_double(path.market_cap[i]) << ','
        << format_double(path.supply[i]) << ',' << format_double(path.price[i]) << ','
        << format_double(path.price_dev[i]) << ','
        << format_double(path.supply_change[i]) << '\n';
  }
}

}  // namespace stablesim

#include "irvol/refresh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irvol/error.hpp"

namespace irvol {

TickSeries aggregate_one_second(const TickSeries& ticks) {
  ticks.validate(1);
  std::vector<double> times, prices;
  for (Index k = 0; k < ticks.size(); ++k) {
    const double second = std::ceil(ticks.timestamps[k]);
    if (!times.empty() && times.back() == second) {
      prices.back() = ticks.prices[k];
    } else {
      times.push_back(second);
      prices.push_back(ticks.prices[k]);
    }
  }
  TickSeries out;
  out.asset_id = ticks.asset_id;
  out.timestamps = Eigen::Map<const VectorXd>(times.data(), static_cast<Index>(times.size()));
  out.prices = Eigen::Map<const VectorXd>(prices.data(), static_cast<Index>(prices.size()));
  return out;
}

VectorXd refresh_times(const std::vector<VectorXd>& tick_times) {
  if (tick_times.size() < 2) throw DomainError("refresh sampling needs at least two assets");
  for (const auto& t : tick_times) {
    if (t.size() == 0) throw DomainError("asset with no ticks");
    for (Index k = 1; k < t.size(); ++k) {
      if (!(t[k] > t[k - 1])) throw OrderingError("tick times must be strictly increasing");
    }
  }
  // next[i]: index of the first tick of asset i strictly after the current tau.
  std::vector<Index> next(tick_times.size(), 0);
  std::vector<double> taus;
  while (true) {
    double tau = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tick_times.size(); ++i) {
      if (next[i] >= tick_times[i].size()) return Eigen::Map<const VectorXd>(taus.data(), static_cast<Index>(taus.size()));
      tau = std::max(tau, tick_times[i][next[i]]);
    }
    taus.push_back(tau);
    for (std::size_t i = 0; i < tick_times.size(); ++i) {
      const auto& t = tick_times[i];
      next[i] = static_cast<Index>(std::upper_bound(t.data(), t.data() + t.size(), tau) - t.data());
    }
  }
}

RefreshResult refresh_sample(const std::vector<TickSeries>& ticks) {
  std::vector<VectorXd> times;
  for (const auto& s : ticks) {
    s.validate(1);
    times.push_back(s.timestamps);
  }
  RefreshResult out;
  out.refresh_times = refresh_times(times);
  const Index m = out.size();
  out.prices.resize(static_cast<Index>(ticks.size()), m);
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    const auto& s = ticks[i];
    out.asset_ids.push_back(s.asset_id);
    const double* begin = s.timestamps.data();
    const double* end = begin + s.size();
    for (Index j = 0; j < m; ++j) {
      // Last tick at or before tau_j; it exists because tau_j >= every first tick.
      const auto k = std::upper_bound(begin, end, out.refresh_times[j]) - begin - 1;
      out.prices(static_cast<Index>(i), j) = s.prices[k];
    }
    const auto consumed = std::upper_bound(begin, end, out.refresh_times[m - 1]) - begin;
    out.counts.push_back(static_cast<Index>(consumed));
  }
  return out;
}

}  // namespace irvol

#ifndef IRVOL_REFRESH_HPP
#define IRVOL_REFRESH_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "irvol/core.hpp"

namespace irvol {

/// Prices of p assets sampled on their common refresh-time grid.
struct RefreshResult {
  std::vector<std::string> asset_ids;
  VectorXd refresh_times;
  /// p x m, row i is asset i.
  MatrixXd prices;
  /// Ticks of each asset at or before the last refresh time.
  std::vector<Index> counts;

  Index size() const { return refresh_times.size(); }
};

/// Keeps the last price of each populated second (k - 1, k] and stamps it
/// with the ceiling second k.
TickSeries aggregate_one_second(const TickSeries& ticks);

/// tau_1 is the latest first tick; tau_{j+1} is the latest over assets of the
/// first tick strictly after tau_j. Stops once some asset has no such tick.
VectorXd refresh_times(const std::vector<VectorXd>& tick_times);

/// Refresh times plus previous-tick prices for every asset.
RefreshResult refresh_sample(const std::vector<TickSeries>& ticks);

}  // namespace irvol

#endif  // IRVOL_REFRESH_HPP

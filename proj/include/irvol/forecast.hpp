#ifndef IRVOL_FORECAST_HPP
#define IRVOL_FORECAST_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "irvol/irsv.hpp"
#include "irvol/mcmc.hpp"

namespace irvol {

inline const std::vector<Index> kDefaultHorizons{1, 5, 10, 22, 44};

struct ForecastOptions {
  std::vector<Index> horizons = kDefaultHorizons;
  /// Forward paths simulated per posterior draw.
  Index paths_per_draw = 10;
  /// Use at most this many evenly spaced posterior draws; 0 uses all.
  Index max_draws = 0;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ForecastRow {
  std::string model;
  std::string asset;
  Index horizon = 0;
  HorizonSummary summary;
};

/// Posterior predictive forecast from an IR-SV or IR-MSV chain. Every draw
/// restarts from its own last latent state; draw d uses stream d of `seed`,
/// so output does not depend on the thread count. `future_gaps` are on the
/// chain's (scaled) time unit and must cover the largest horizon.
std::vector<ForecastRow> forecast_from_chain(const McmcChain& chain, const std::vector<std::string>& assets,
                                             const Eigen::Ref<const VectorXd>& future_gaps,
                                             const ForecastOptions& options);

/// Which forecast column is scored against which realized quantity.
enum class CompareTarget { SquaredReturn, AbsReturn, Volatility };

const char* to_string(CompareTarget target);

/// Absolute error per horizon for one asset: |forecast - realized| at the
/// step given by the horizon (1-based into `realized`).
double forecast_abs_error(const ForecastRow& row, CompareTarget target,
                          const Eigen::Ref<const VectorXd>& realized_returns);

}  // namespace irvol

#endif  // IRVOL_FORECAST_HPP

#include "irvol/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "irvol/error.hpp"
#include "irvol/irmsv.hpp"

namespace irvol {

namespace {

std::vector<Index> chosen_draws(Index n, Index max_draws) {
  std::vector<Index> idx;
  if (max_draws <= 0 || max_draws >= n) {
    for (Index d = 0; d < n; ++d) idx.push_back(d);
    return idx;
  }
  for (Index k = 0; k < max_draws; ++k) idx.push_back(k * n / max_draws);
  return idx;
}

template <class Work>
void parallel_for(Index n, int threads, Work&& work) {
  const Index t = std::clamp<Index>(threads, 1, std::max<Index>(n, 1));
  if (t == 1) {
    for (Index k = 0; k < n; ++k) work(k);
    return;
  }
  std::vector<std::thread> pool;
  for (Index w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      for (Index k = w; k < n; k += t) work(k);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<ForecastRow> forecast_from_chain(const McmcChain& chain, const std::vector<std::string>& assets,
                                             const Eigen::Ref<const VectorXd>& future_gaps,
                                             const ForecastOptions& options) {
  if (options.horizons.empty()) throw ConfigError("no forecast horizons given");
  if (options.paths_per_draw < 1) throw ConfigError("paths per draw must be positive");
  for (Index h : options.horizons) {
    if (h < 1) throw ConfigError("forecast horizons must be positive");
  }
  const Index steps = *std::max_element(options.horizons.begin(), options.horizons.end());
  if (future_gaps.size() < steps) throw DomainError("not enough future gaps for the largest horizon");
  if (chain.n_draws() == 0) throw DomainError("chain has no draws");
  const VectorXd gaps = future_gaps.head(steps);

  const bool msv = chain.model == "irmsv";
  if (!msv && chain.model != "irsv") throw DomainError("cannot forecast from a '" + chain.model + "' chain");
  const Index p = msv ? static_cast<Index>(assets.size()) : 1;
  if (static_cast<Index>(assets.size()) != p) throw DomainError("an IR-SV chain forecasts exactly one asset");

  // Column of the last latent state of each asset.
  std::vector<Index> last_col(static_cast<std::size_t>(p), -1);
  for (Index i = 0; i < p; ++i) {
    const std::string prefix = msv ? "h_" + std::to_string(i + 1) + "[" : "h[";
    Index best = -1;
    long best_t = -1;
    for (std::size_t k = 0; k < chain.latent_names.size(); ++k) {
      const auto& n = chain.latent_names[k];
      if (n.rfind(prefix, 0) != 0) continue;
      const long t = std::stol(n.substr(prefix.size()));
      if (t > best_t) {
        best_t = t;
        best = static_cast<Index>(k);
      }
    }
    if (best < 0) throw DomainError("chain stores no latent states to forecast from");
    last_col[static_cast<std::size_t>(i)] = best;
  }

  const auto draws = chosen_draws(chain.n_draws(), options.max_draws);
  const Index n_draws = static_cast<Index>(draws.size());
  const Index paths = options.paths_per_draw;
  std::vector<MatrixXd> h_all(static_cast<std::size_t>(p), MatrixXd(n_draws * paths, steps));
  std::vector<MatrixXd> r_all(static_cast<std::size_t>(p), MatrixXd(n_draws * paths, steps));

  parallel_for(n_draws, options.threads, [&](Index k) {
    const Index d = draws[static_cast<std::size_t>(k)];
    Rng rng(options.seed, static_cast<std::uint64_t>(d));
    if (msv) {
      const IrMsvParams params = irmsv_params_from_draw(chain, d, p);
      VectorXd last_h(p);
      for (Index i = 0; i < p; ++i) last_h[i] = chain.latent_draws(d, last_col[static_cast<std::size_t>(i)]);
      MatrixXd h(p, steps), r(p, steps);
      for (Index q = 0; q < paths; ++q) {
        simulate_forward_msv(params, last_h, gaps, rng, h, r);
        for (Index i = 0; i < p; ++i) {
          h_all[static_cast<std::size_t>(i)].row(k * paths + q) = h.row(i);
          r_all[static_cast<std::size_t>(i)].row(k * paths + q) = r.row(i);
        }
      }
    } else {
      const IrSvParams params = irsv_params_from_draw(chain, d);
      const double last_h = chain.latent_draws(d, last_col[0]);
      VectorXd h(steps), r(steps);
      for (Index q = 0; q < paths; ++q) {
        simulate_forward(params, last_h, gaps, rng, h, r);
        h_all[0].row(k * paths + q) = h.transpose();
        r_all[0].row(k * paths + q) = r.transpose();
      }
    }
  });

  std::vector<ForecastRow> rows;
  for (Index i = 0; i < p; ++i) {
    const auto per_step = summarize_forecast_draws(h_all[static_cast<std::size_t>(i)], r_all[static_cast<std::size_t>(i)]);
    for (Index hz : options.horizons) {
      ForecastRow row;
      row.model = chain.model;
      row.asset = assets[static_cast<std::size_t>(i)];
      row.horizon = hz;
      row.summary = per_step[static_cast<std::size_t>(hz - 1)];
      rows.push_back(row);
    }
  }
  return rows;
}

const char* to_string(CompareTarget target) {
  switch (target) {
    case CompareTarget::SquaredReturn:
      return "r2";
    case CompareTarget::AbsReturn:
      return "abs_r";
    case CompareTarget::Volatility:
      return "vol";
  }
  return "";
}

double forecast_abs_error(const ForecastRow& row, CompareTarget target,
                          const Eigen::Ref<const VectorXd>& realized_returns) {
  if (row.horizon < 1 || row.horizon > realized_returns.size()) {
    throw DomainError("horizon " + std::to_string(row.horizon) + " exceeds the hold-out length");
  }
  const double r = realized_returns[row.horizon - 1];
  switch (target) {
    case CompareTarget::SquaredReturn:
      return std::abs(row.summary.var_mean - r * r);
    case CompareTarget::AbsReturn:
      return std::abs(row.summary.abs_r_mean - std::abs(r));
    case CompareTarget::Volatility:
      return std::abs(row.summary.vol_mean - std::abs(r));
  }
  return 0.0;
}

}  // namespace irvol

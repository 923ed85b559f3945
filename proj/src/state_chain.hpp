#ifndef IRVOL_SRC_STATE_CHAIN_HPP
#define IRVOL_SRC_STATE_CHAIN_HPP

// Shared machinery for the latent-state samplers: per-gap transition
// coefficients and the state-path log-likelihood of one gap-time AR(1).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "irvol/core.hpp"
#include "irvol/irsv.hpp"

namespace irvol::detail {

inline const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

/// Distinct gap values and, for every gap, the index of its value. Real and
/// simulated gaps take few distinct values, so phi^g is computed per value.
struct GapTable {
  std::vector<double> values;
  std::vector<int> index;

  explicit GapTable(const Eigen::Ref<const VectorXd>& gaps) {
    values.assign(gaps.data(), gaps.data() + gaps.size());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    index.resize(static_cast<std::size_t>(gaps.size()));
    for (Index j = 0; j < gaps.size(); ++j) {
      index[static_cast<std::size_t>(j)] = static_cast<int>(
          std::lower_bound(values.begin(), values.end(), gaps[j]) - values.begin());
    }
  }
};

/// Transition mean factor a = phi^g and innovation variance per distinct gap,
/// plus the stationary variance of the first state.
struct Transition {
  double mu = 0.0;
  double stationary_var = 1.0;
  double stationary_log_var = 0.0;
  std::vector<double> a;
  std::vector<double> inv_var;
  std::vector<double> log_var;

  void set(const IrSvParams& p, const GapTable& table) {
    mu = p.mu;
    const double s2 = p.sigma_eta * p.sigma_eta;
    stationary_var = s2 / (1.0 - p.phi * p.phi);
    stationary_log_var = std::log(stationary_var);
    const std::size_t n = table.values.size();
    a.resize(n);
    inv_var.resize(n);
    log_var.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = std::pow(p.phi, table.values[k]);
      const double v = s2 * innovation_variance_ratio(p.phi, table.values[k]);
      inv_var[k] = 1.0 / v;
      log_var[k] = std::log(v);
    }
  }
};

/// log p(h_1) + sum_j log p(h_j | h_{j-1}) for one asset. `h` is addressed
/// with a stride so rows of a p x T matrix can be used directly.
template <class Path>
double state_log_likelihood(const Path& h, Index length, const Transition& tr, const GapTable& table) {
  double d0 = h(0) - tr.mu;
  double acc = tr.stationary_log_var + d0 * d0 / tr.stationary_var;
  for (Index j = 1; j < length; ++j) {
    const auto k = static_cast<std::size_t>(table.index[static_cast<std::size_t>(j - 1)]);
    const double d = h(j) - tr.mu - tr.a[k] * (h(j - 1) - tr.mu);
    acc += tr.log_var[k] + d * d * tr.inv_var[k];
  }
  return -0.5 * (static_cast<double>(length) * kLogTwoPi + acc);
}

/// Prior part of the full conditional of state j: its own transition (or the
/// stationary density at j = 0) plus the transition into state j + 1.
template <class Path>
double state_site_log_prior(double x, Index j, const Path& h, Index length, const Transition& tr,
                            const GapTable& table) {
  double acc;
  if (j == 0) {
    const double d = x - tr.mu;
    acc = -0.5 * d * d / tr.stationary_var;
  } else {
    const auto k = static_cast<std::size_t>(table.index[static_cast<std::size_t>(j - 1)]);
    const double d = x - tr.mu - tr.a[k] * (h(j - 1) - tr.mu);
    acc = -0.5 * d * d * tr.inv_var[k];
  }
  if (j + 1 < length) {
    const auto k = static_cast<std::size_t>(table.index[static_cast<std::size_t>(j)]);
    const double d = h(j + 1) - tr.mu - tr.a[k] * (x - tr.mu);
    acc -= 0.5 * d * d * tr.inv_var[k];
  }
  return acc;
}

/// Time indices whose latent states are stored.
inline std::vector<Index> stored_state_indices(Index length, Index stride, bool all) {
  std::vector<Index> idx;
  const Index step = all ? 1 : stride;
  for (Index j = 0; j < length; j += step) idx.push_back(j);
  if (idx.empty() || idx.back() != length - 1) idx.push_back(length - 1);
  return idx;
}

}  // namespace irvol::detail

#endif  // IRVOL_SRC_STATE_CHAIN_HPP

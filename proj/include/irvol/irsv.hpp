#ifndef IRVOL_IRSV_HPP
#define IRVOL_IRSV_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "irvol/core.hpp"
#include "irvol/error.hpp"
#include "irvol/random.hpp"

namespace irvol {

/// Univariate irregular stochastic volatility parameters.
///
///   r_j = exp(h_j / 2) eps_j
///   h_1 ~ N(mu, sigma_eta^2 / (1 - phi^2))
///   h_j = mu + phi^{g_j} (h_{j-1} - mu) + eta_j,
///         eta_j ~ N(0, sigma_eta^2 (1 - phi^{2 g_j}) / (1 - phi^2))
template <typename Scalar>
struct IrSvParamsT {
  Scalar mu{};
  Scalar phi{};
  Scalar sigma_eta{};
};

using IrSvParams = IrSvParamsT<double>;

/// Requires 0 < phi < 1 and sigma_eta > 0. Negative persistence is rejected:
/// phi^g is not real for phi < 0 and fractional g.
void validate(const IrSvParams& params);

/// As validate() but accepts sigma_eta == 0 (noiseless recursions for forecasting).
void validate_allow_degenerate(const IrSvParams& params);

template <typename Scalar>
Scalar stationary_variance(const IrSvParamsT<Scalar>& p) {
  return p.sigma_eta * p.sigma_eta / (Scalar(1) - p.phi * p.phi);
}

/// (1 - phi^{2g}) / (1 - phi^2); exactly 1 at g == 1.
template <typename Scalar>
Scalar innovation_variance_ratio(Scalar phi, Scalar gap) {
  using std::pow;
  const Scalar a = pow(phi, gap);
  return (Scalar(1) - a * a) / (Scalar(1) - phi * phi);
}

template <typename Scalar>
Scalar normal_log_density(Scalar x, Scalar mean, Scalar variance) {
  using std::log;
  const Scalar d = x - mean;
  return Scalar(-0.5) * (Scalar(std::log(2.0 * std::numbers::pi)) + log(variance) + d * d / variance);
}

/// log N(r | 0, exp(h)).
template <typename Scalar>
Scalar observation_log_density(Scalar r, Scalar h) {
  using std::exp;
  return Scalar(-0.5) * (Scalar(std::log(2.0 * std::numbers::pi)) + h + r * r * exp(-h));
}

/// Stationary density of the first state.
template <typename Scalar>
Scalar initial_state_log_density(Scalar h, const IrSvParamsT<Scalar>& p) {
  if (!(p.phi * p.phi < Scalar(1))) throw ParameterError("|phi| must be < 1");
  return normal_log_density(h, p.mu, stationary_variance(p));
}

/// log p(h_curr | h_prev) across a gap.
template <typename Scalar>
Scalar state_transition_log_density(Scalar h_curr, Scalar h_prev, Scalar gap,
                                    const IrSvParamsT<Scalar>& p) {
  using std::pow;
  if (!(p.phi * p.phi < Scalar(1))) throw ParameterError("|phi| must be < 1");
  if (!(gap > Scalar(0))) throw DomainError("gap must be positive");
  const Scalar mean = p.mu + pow(p.phi, gap) * (h_prev - p.mu);
  const Scalar var = p.sigma_eta * p.sigma_eta * innovation_variance_ratio(p.phi, gap);
  return normal_log_density(h_curr, mean, var);
}

struct IrSvPath {
  VectorXd h;
  VectorXd returns;
};

/// Simulates `length` observations. `gaps` holds g_2..g_length (at least
/// length - 1 entries). Each step draws the state innovation first, then the
/// observation noise, from `rng`.
IrSvPath simulate_irsv(const IrSvParams& params, const Eigen::Ref<const VectorXd>& gaps,
                       Index length, Rng& rng);
IrSvPath simulate_irsv(const IrSvParams& params, const ScaledGaps& gaps, Index length,
                       std::uint64_t seed);

/// Predictive summary at one forecast step. `var_*` refers to the conditional
/// variance E[r^2 | h] = exp(h); `r2_mean` and `abs_r_mean` come from simulated returns.
struct HorizonSummary {
  Index step = 0;
  double h_mean = 0, h_lo = 0, h_hi = 0;
  double var_mean = 0, var_lo = 0, var_hi = 0;
  double vol_mean = 0;
  double r2_mean = 0;
  double abs_r_mean = 0;
};

/// Simulates n_draws paths of the state recursion forward from last_h over
/// future_gaps and summarizes each step (2.5% / 97.5% quantiles).
std::vector<HorizonSummary> forecast(const IrSvParams& params, double last_h,
                                     const Eigen::Ref<const VectorXd>& future_gaps,
                                     Index n_draws, Rng& rng);

/// Rows are draws, columns are forecast steps.
std::vector<HorizonSummary> summarize_forecast_draws(const MatrixXd& h_draws,
                                                     const MatrixXd& r_draws);

/// One forward path: fills h_out/r_out (length = future_gaps.size()).
void simulate_forward(const IrSvParams& params, double last_h,
                      const Eigen::Ref<const VectorXd>& future_gaps, Rng& rng,
                      Eigen::Ref<VectorXd> h_out, Eigen::Ref<VectorXd> r_out);

}  // namespace irvol

#endif  // IRVOL_IRSV_HPP

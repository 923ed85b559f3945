#ifndef IRVOL_MCMC_HPP
#define IRVOL_MCMC_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irvol/core.hpp"
#include "irvol/irmsv.hpp"
#include "irvol/irsv.hpp"
#include "irvol/random.hpp"

namespace irvol {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct BetaPrior {
  double a = 1.0;
  double b = 1.0;
};

/// Shape-rate parameterization: mean shape / rate.
struct GammaPrior {
  double shape = 1.0;
  double rate = 1.0;
};

/// Mean-variance parameterization.
struct NormalPrior {
  double mean = 0.0;
  double variance = 1.0;
};

/// (phi + 1) / 2 ~ Beta(20, 1.5); 1 / sigma_eta^2 ~ Gamma(2.5, rate 0.025); mu ~ N(0, 10).
struct IrSvPriors {
  BetaPrior phi_beta{20.0, 1.5};
  GammaPrior precision_gamma{2.5, 0.025};
  NormalPrior mu_normal{0.0, 10.0};

  void validate() const;
};

/// Per asset: mu_i ~ N(0, 10), 1 / sigma_i^2 ~ Gamma(2.5, rate 0.025),
/// phi_i ~ N(0, 0.5) truncated to (-1, 1). R ~ LKJ(1.2).
struct IrMsvPriors {
  NormalPrior mu_normal{0.0, 10.0};
  GammaPrior precision_gamma{2.5, 0.025};
  NormalPrior phi_normal{0.0, 0.5};
  double lkj_eta = 1.2;

  void validate() const;
};

struct McmcConfig {
  Index n_iterations = 20000;
  Index burn_in = 5000;
  Index thin = 10;
  double target_accept_scalar = 0.44;
  double target_accept_block = 0.234;
  Index adapt_interval = 200;
  std::uint64_t seed = 1;
  /// Stream index for independent chains sharing one seed.
  std::uint64_t chain_id = 0;
  /// Stored latent states: every latent_stride-th time index plus the last one.
  Index latent_stride = 10;
  bool store_all_latent = false;
  /// When false the observation model is dropped and parameters are drawn from their priors.
  bool use_likelihood = true;
  /// Progress line to stderr every this many iterations; 0 disables.
  Index progress_every = 0;

  Index stored_draws() const { return (n_iterations - burn_in) / thin; }
  void validate() const;
};

struct McmcChain {
  std::string model;
  std::vector<std::string> param_names;
  MatrixXd draws;  // stored draws x parameters
  std::vector<std::string> latent_names;
  MatrixXd latent_draws;  // stored draws x stored latent states
  /// Post-burn-in acceptance rate per sampler group.
  std::vector<std::pair<std::string, double>> acceptance;
  std::optional<McmcConfig> config;
  std::vector<std::string> warnings;
  /// Numeric facts about the fitted data (gap scale factor, last timestamp, ...).
  std::map<std::string, double> metadata;
  /// Names of the fitted data columns, one per asset.
  std::vector<std::string> series_names;

  Index n_draws() const { return draws.rows(); }
  /// Column position of a parameter or latent name, or -1.
  Index param_index(const std::string& name) const;
  Index latent_index(const std::string& name) const;
  VectorXd param(const std::string& name) const;
};

struct ParameterSummary {
  std::string name;
  double mean = 0;
  double sd = 0;
  double q_lo = 0;
  double q_hi = 0;
  double ess = 0;
  std::optional<double> true_value;
};

struct PosteriorSummary {
  std::vector<ParameterSummary> parameters;
  double prob_lo = 0.025;
  double prob_hi = 0.975;

  const ParameterSummary& at(const std::string& name) const;
};

struct FitResult {
  McmcChain chain;
  PosteriorSummary summary;
};

// ---------------------------------------------------------------------------
// Priors

double beta_log_density(double x, double a, double b);
/// Gamma(shape, rate) log-density.
double gamma_log_density(double x, double shape, double rate);
/// Log-density on variance s2 induced by a Gamma(shape, rate) prior on 1 / s2.
double inverse_gamma_from_precision_log_density(double s2, const GammaPrior& precision);
/// log of the normalizer of N(mean, variance) truncated to (lo, hi).
double truncated_normal_log_mass(const NormalPrior& prior, double lo, double hi);

/// Joint prior log-density over (phi, sigma_eta^2, mu). -inf outside the support.
double log_prior_irsv(const IrSvParams& params, const IrSvPriors& priors);

/// Joint prior log-density over (mu_i, phi_i, sigma_i^2, R), with the LKJ
/// term (eta - 1) log det R (unnormalized). -inf outside the support.
double log_prior_irmsv(const IrMsvParams& params, const IrMsvPriors& priors);

// ---------------------------------------------------------------------------
// Samplers

/// Proposal scale tuned toward a target acceptance rate. Every `interval`
/// proposals log(scale) moves by (rate - target) / sqrt(round) until frozen.
class AdaptiveScale {
 public:
  AdaptiveScale() = default;
  AdaptiveScale(double initial_scale, double target, Index interval)
      : log_scale_(std::log(initial_scale)), target_(target), interval_(interval) {}

  double scale() const { return std::exp(log_scale_); }
  bool adapting() const { return adapting_; }

  void record(bool accepted);
  void freeze() { adapting_ = false; }
  void reset_counts() { accepted_ = proposed_ = 0; }
  double acceptance_rate() const {
    return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
  }
  Index accepted() const { return accepted_; }
  Index proposed() const { return proposed_; }

 private:
  double log_scale_ = 0.0;
  double target_ = 0.44;
  Index interval_ = 200;
  Index round_ = 0;
  Index window_accepted_ = 0;
  Index window_total_ = 0;
  Index accepted_ = 0;
  Index proposed_ = 0;
  bool adapting_ = true;
};

struct RwmStep {
  double value;
  double log_target;
  bool accepted;
};

/// One random-walk Metropolis step x' = x + scale z. -inf targets always reject.
template <class LogTarget>
RwmStep adaptive_rwm_scalar(double current, double current_log_target, LogTarget&& log_target,
                            AdaptiveScale& scale, Rng& rng) {
  const double proposal = current + scale.scale() * rng.normal();
  const double lt = log_target(proposal);
  bool accepted = false;
  if (lt > kNegInf && !std::isnan(lt)) {
    accepted = std::log(rng.uniform()) < lt - current_log_target;
  }
  scale.record(accepted);
  return accepted ? RwmStep{proposal, lt, true} : RwmStep{current, current_log_target, false};
}

template <class LogTarget>
RwmStep adaptive_rwm_scalar(double current, LogTarget&& log_target, AdaptiveScale& scale,
                            Rng& rng) {
  const double lt = log_target(current);
  return adaptive_rwm_scalar(current, lt, log_target, scale, rng);
}

struct BlockStep {
  CorrelationMatrix R;
  double log_target;
  bool accepted;
};

/// Joint Gaussian random walk on the strictly-lower correlations. Proposals
/// that are not valid correlation matrices are rejected without evaluating
/// the target, which keeps the proposal symmetric on the valid set.
template <class LogTarget>
BlockStep correlation_block_step(const CorrelationMatrix& current, double current_log_target,
                                 LogTarget&& log_target, AdaptiveScale& scale, Rng& rng) {
  const Index p = current.dim();
  MatrixXd m = current.matrix();
  for (Index i = 1; i < p; ++i) {
    for (Index k = 0; k < i; ++k) {
      m(i, k) += scale.scale() * rng.normal();
      m(k, i) = m(i, k);
    }
  }
  auto proposal = CorrelationMatrix::try_make(m);
  if (!proposal) {
    scale.record(false);
    return {current, current_log_target, false};
  }
  const double lt = log_target(*proposal);
  bool accepted = false;
  if (lt > kNegInf && !std::isnan(lt)) {
    accepted = std::log(rng.uniform()) < lt - current_log_target;
  }
  scale.record(accepted);
  if (accepted) return {std::move(*proposal), lt, true};
  return {current, current_log_target, false};
}

// ---------------------------------------------------------------------------
// Model fits

/// Single-site adaptive random-walk sampler over every latent state plus mu,
/// phi (on the (phi + 1) / 2 scale) and sigma_eta (on the log scale).
/// Requires T >= 10 and gaps scaled into (0, 1].
FitResult fit_irsv(const GapSeries& series, const IrSvPriors& priors, const McmcConfig& config);

/// Same scheme for p assets, plus a block random walk on R.
/// `returns` is p x T, `gaps` has T - 1 entries in (0, 1].
FitResult fit_irmsv(const MatrixXd& returns, const Eigen::Ref<const VectorXd>& gaps,
                    const IrMsvPriors& priors, const McmcConfig& config);

/// Concatenates chains with identical layouts (acceptance rates are averaged).
McmcChain merge_chains(const std::vector<McmcChain>& chains);

PosteriorSummary summarize(const McmcChain& chain, double prob_lo = 0.025, double prob_hi = 0.975);

/// Parameter names used in IR-MSV chains.
std::vector<std::string> irmsv_param_names(Index p);

/// Rebuild parameter sets from one stored draw.
IrSvParams irsv_params_from_draw(const McmcChain& chain, Index draw);
IrMsvParams irmsv_params_from_draw(const McmcChain& chain, Index draw, Index p);

}  // namespace irvol

#endif  // IRVOL_MCMC_HPP

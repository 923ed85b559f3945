#include <algorithm>
#include <cmath>
#include <numbers>

#include "irvol/error.hpp"
#include "irvol/mcmc.hpp"

namespace irvol {

void IrSvPriors::validate() const {
  if (!(phi_beta.a > 0 && phi_beta.b > 0)) throw ConfigError("Beta prior shapes must be positive");
  if (!(precision_gamma.shape > 0 && precision_gamma.rate > 0)) {
    throw ConfigError("Gamma prior shape and rate must be positive");
  }
  if (!(mu_normal.variance > 0)) throw ConfigError("normal prior variance must be positive");
}

void IrMsvPriors::validate() const {
  if (!(precision_gamma.shape > 0 && precision_gamma.rate > 0)) {
    throw ConfigError("Gamma prior shape and rate must be positive");
  }
  if (!(mu_normal.variance > 0 && phi_normal.variance > 0)) {
    throw ConfigError("normal prior variance must be positive");
  }
  if (!(lkj_eta > 0)) throw ConfigError("LKJ eta must be positive");
}

void McmcConfig::validate() const {
  if (n_iterations < 1 || thin < 1 || adapt_interval < 1 || latent_stride < 1) {
    throw ConfigError("iterations, thin, adapt interval and latent stride must be positive");
  }
  if (burn_in < 0 || burn_in >= n_iterations) throw ConfigError("burn-in must be in [0, iterations)");
  if ((n_iterations - burn_in) % thin != 0) {
    throw ConfigError("iterations - burn-in must be a multiple of thin");
  }
  if (!(target_accept_scalar > 0 && target_accept_scalar < 1 && target_accept_block > 0 &&
        target_accept_block < 1)) {
    throw ConfigError("target acceptance rates must lie in (0, 1)");
  }
}

double beta_log_density(double x, double a, double b) {
  if (!(x > 0.0 && x < 1.0)) return kNegInf;
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(x) +
         (b - 1.0) * std::log1p(-x);
}

double gamma_log_density(double x, double shape, double rate) {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double inverse_gamma_from_precision_log_density(double s2, const GammaPrior& precision) {
  if (!(s2 > 0.0)) return kNegInf;
  // tau = 1 / s2, |d tau / d s2| = s2^{-2}
  return gamma_log_density(1.0 / s2, precision.shape, precision.rate) - 2.0 * std::log(s2);
}

double truncated_normal_log_mass(const NormalPrior& prior, double lo, double hi) {
  const double sd = std::sqrt(prior.variance);
  const double a = (lo - prior.mean) / (sd * std::numbers::sqrt2);
  const double b = (hi - prior.mean) / (sd * std::numbers::sqrt2);
  return std::log(0.5 * (std::erf(b) - std::erf(a)));
}

double log_prior_irsv(const IrSvParams& params, const IrSvPriors& priors) {
  if (!(params.phi > -1.0 && params.phi < 1.0)) return kNegInf;
  if (!(params.sigma_eta > 0.0)) return kNegInf;
  const double u = (params.phi + 1.0) / 2.0;
  const double phi_term = beta_log_density(u, priors.phi_beta.a, priors.phi_beta.b) + std::log(0.5);
  const double s2 = params.sigma_eta * params.sigma_eta;
  const double sigma_term = inverse_gamma_from_precision_log_density(s2, priors.precision_gamma);
  const double mu_term = normal_log_density(params.mu, priors.mu_normal.mean, priors.mu_normal.variance);
  return phi_term + sigma_term + mu_term;
}

double log_prior_irmsv(const IrMsvParams& params, const IrMsvPriors& priors) {
  const Index p = params.dim();
  if (params.phi.size() != p || params.sigma.size() != p || params.R.dim() != p) {
    throw ParameterError("parameter dimensions disagree");
  }
  const double phi_log_mass = truncated_normal_log_mass(priors.phi_normal, -1.0, 1.0);
  double lp = 0.0;
  for (Index i = 0; i < p; ++i) {
    const double phi = params.phi[i];
    const double sigma = params.sigma[i];
    if (!(phi > -1.0 && phi < 1.0) || !(sigma > 0.0)) return kNegInf;
    lp += normal_log_density(params.mu[i], priors.mu_normal.mean, priors.mu_normal.variance);
    lp += normal_log_density(phi, priors.phi_normal.mean, priors.phi_normal.variance) - phi_log_mass;
    lp += inverse_gamma_from_precision_log_density(sigma * sigma, priors.precision_gamma);
  }
  lp += (priors.lkj_eta - 1.0) * params.R.log_det();
  return lp;
}

void AdaptiveScale::record(bool accepted) {
  ++proposed_;
  if (accepted) ++accepted_;
  if (!adapting_) return;
  ++window_total_;
  if (accepted) ++window_accepted_;
  if (window_total_ >= interval_) {
    ++round_;
    const double rate = static_cast<double>(window_accepted_) / static_cast<double>(window_total_);
    log_scale_ += (rate - target_) / std::sqrt(static_cast<double>(round_));
    window_accepted_ = 0;
    window_total_ = 0;
  }
}

Index McmcChain::param_index(const std::string& name) const {
  auto it = std::find(param_names.begin(), param_names.end(), name);
  return it == param_names.end() ? -1 : static_cast<Index>(it - param_names.begin());
}

Index McmcChain::latent_index(const std::string& name) const {
  auto it = std::find(latent_names.begin(), latent_names.end(), name);
  return it == latent_names.end() ? -1 : static_cast<Index>(it - latent_names.begin());
}

VectorXd McmcChain::param(const std::string& name) const {
  const Index k = param_index(name);
  if (k < 0) throw DomainError("chain has no parameter '" + name + "'");
  return draws.col(k);
}

const ParameterSummary& PosteriorSummary::at(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw DomainError("summary has no parameter '" + name + "'");
}

McmcChain merge_chains(const std::vector<McmcChain>& chains) {
  if (chains.empty()) throw DomainError("no chains to merge");
  McmcChain out = chains.front();
  if (chains.size() == 1) return out;
  Index rows = 0;
  for (const auto& c : chains) {
    if (c.param_names != out.param_names || c.latent_names != out.latent_names) {
      throw DomainError("chains have different layouts");
    }
    rows += c.n_draws();
  }
  out.draws.resize(rows, out.draws.cols());
  out.latent_draws.resize(rows, out.latent_draws.cols());
  Index r = 0;
  for (const auto& c : chains) {
    out.draws.middleRows(r, c.n_draws()) = c.draws;
    out.latent_draws.middleRows(r, c.n_draws()) = c.latent_draws;
    r += c.n_draws();
  }
  for (std::size_t k = 0; k < out.acceptance.size(); ++k) {
    double sum = 0;
    for (const auto& c : chains) sum += c.acceptance[k].second;
    out.acceptance[k].second = sum / static_cast<double>(chains.size());
  }
  for (std::size_t c = 1; c < chains.size(); ++c) {
    out.warnings.insert(out.warnings.end(), chains[c].warnings.begin(), chains[c].warnings.end());
  }
  return out;
}

std::vector<std::string> irmsv_param_names(Index p) {
  std::vector<std::string> names;
  for (const char* base : {"mu_", "phi_", "sigma_"}) {
    for (Index i = 1; i <= p; ++i) names.push_back(base + std::to_string(i));
  }
  for (Index i = 2; i <= p; ++i) {
    for (Index k = 1; k < i; ++k) names.push_back("rho_" + std::to_string(k) + std::to_string(i));
  }
  return names;
}

IrSvParams irsv_params_from_draw(const McmcChain& chain, Index draw) {
  return {chain.draws(draw, chain.param_index("mu")), chain.draws(draw, chain.param_index("phi")),
          chain.draws(draw, chain.param_index("sigma"))};
}

IrMsvParams irmsv_params_from_draw(const McmcChain& chain, Index draw, Index p) {
  const auto names = irmsv_param_names(p);
  IrMsvParams params;
  params.mu.resize(p);
  params.phi.resize(p);
  params.sigma.resize(p);
  VectorXd lower(p * (p - 1) / 2);
  for (std::size_t n = 0; n < names.size(); ++n) {
    const Index col = chain.param_index(names[n]);
    if (col < 0) throw DomainError("chain is missing '" + names[n] + "'");
    const double v = chain.draws(draw, col);
    const Index k = static_cast<Index>(n);
    if (k < p) params.mu[k] = v;
    else if (k < 2 * p) params.phi[k - p] = v;
    else if (k < 3 * p) params.sigma[k - 2 * p] = v;
    else lower[k - 3 * p] = v;
  }
  params.R = CorrelationMatrix::from_lower(p, lower);
  return params;
}

}  // namespace irvol

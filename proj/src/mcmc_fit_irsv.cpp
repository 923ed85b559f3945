#include <cmath>
#include <iostream>

#include "irvol/error.hpp"
#include "irvol/mcmc.hpp"
#include "state_chain.hpp"

namespace irvol {

namespace {

constexpr double kReturnFloor = 1e-12;
constexpr double kLogChiSqOffset = 1.27;

struct InitialState {
  double mu;
  VectorXd h;
  bool degenerate;
};

InitialState initial_state(const Eigen::Ref<const VectorXd>& r) {
  InitialState init{0.0, (r.array().square() + kReturnFloor).log().matrix(), false};
  double sum = 0.0;
  Index n = 0;
  for (Index j = 0; j < r.size(); ++j) {
    if (r[j] != 0.0) {
      sum += std::log(r[j] * r[j]);
      ++n;
    }
  }
  if (n == 0) {
    init.degenerate = true;
    init.mu = std::log(kReturnFloor) + kLogChiSqOffset;
  } else {
    init.mu = sum / static_cast<double>(n) + kLogChiSqOffset;
  }
  return init;
}

}  // namespace

FitResult fit_irsv(const GapSeries& series, const IrSvPriors& priors, const McmcConfig& config) {
  config.validate();
  priors.validate();
  series.validate();
  const Index T = series.size();
  if (T < 10) throw DomainError("IR-SV fit needs at least 10 observations");
  if (!(series.gaps.array() <= 1.0 + 1e-12).all()) {
    throw DomainError("gaps must be scaled into (0, 1] before fitting");
  }

  const VectorXd& r = series.values;
  const detail::GapTable table(series.gaps);
  const bool use_lik = config.use_likelihood;

  Rng rng(config.seed, config.chain_id);
  McmcChain chain;
  chain.model = "irsv";
  chain.config = config;
  chain.param_names = {"mu", "phi", "sigma"};

  InitialState init = initial_state(r);
  if (init.degenerate) chain.warnings.push_back("all returns are zero; posterior is driven by the priors");
  VectorXd h = init.h;
  IrSvParams theta{init.mu, 0.5, 1.0};
  detail::Transition tr;
  tr.set(theta, table);

  const auto stored_idx = detail::stored_state_indices(T, config.latent_stride, config.store_all_latent);
  if (use_lik) {
    for (Index j : stored_idx) chain.latent_names.push_back("h[" + std::to_string(j + 1) + "]");
  }
  const Index n_store = config.stored_draws();
  chain.draws.resize(n_store, 3);
  chain.latent_draws.resize(n_store, static_cast<Index>(chain.latent_names.size()));

  const double ts = config.target_accept_scalar;
  const Index ai = config.adapt_interval;
  std::vector<AdaptiveScale> h_scale(static_cast<std::size_t>(T), AdaptiveScale(1.0, ts, ai));
  AdaptiveScale mu_scale(0.1, ts, ai);
  AdaptiveScale phi_scale(0.05, ts, ai);
  AdaptiveScale sigma_scale(0.1, ts, ai);

  auto hpath = [&h](Index j) { return h[j]; };
  auto state_ll = [&](const IrSvParams& p) {
    if (!use_lik) return 0.0;
    detail::Transition t;
    t.set(p, table);
    return detail::state_log_likelihood(hpath, T, t, table);
  };
  // Parameter targets; phi and sigma are sampled on u = (phi + 1) / 2 and log sigma.
  const double phi_lo = use_lik ? 0.0 : -1.0;
  auto target = [&](const IrSvParams& p, double jacobian) {
    if (!(p.phi > phi_lo && p.phi < 1.0) || !(p.sigma_eta > 0.0)) return kNegInf;
    const double lp = log_prior_irsv(p, priors);
    if (lp == kNegInf) return kNegInf;
    return lp + jacobian + state_ll(p);
  };
  auto log_sigma_jacobian = [](double sigma) { return std::log(2.0 * sigma * sigma); };

  Index stored = 0;
  for (Index it = 0; it < config.n_iterations; ++it) {
    if (it == config.burn_in) {
      for (auto& s : h_scale) {
        s.freeze();
        s.reset_counts();
      }
      for (AdaptiveScale* s : {&mu_scale, &phi_scale, &sigma_scale}) {
        s->freeze();
        s->reset_counts();
      }
    }

    if (use_lik) {
      for (Index j = 0; j < T; ++j) {
        const double rj2 = r[j] * r[j];
        auto site = [&](double x) {
          return -0.5 * (x + rj2 * std::exp(-x)) + detail::state_site_log_prior(x, j, hpath, T, tr, table);
        };
        h[j] = adaptive_rwm_scalar(h[j], site, h_scale[static_cast<std::size_t>(j)], rng).value;
      }
    }

    double current = target(theta, log_sigma_jacobian(theta.sigma_eta));

    auto mu_step = adaptive_rwm_scalar(
        theta.mu, current,
        [&](double m) { return target({m, theta.phi, theta.sigma_eta}, log_sigma_jacobian(theta.sigma_eta)); },
        mu_scale, rng);
    theta.mu = mu_step.value;
    current = mu_step.log_target;

    auto phi_step = adaptive_rwm_scalar(
        (theta.phi + 1.0) / 2.0, current,
        [&](double u) {
          return target({theta.mu, 2.0 * u - 1.0, theta.sigma_eta}, log_sigma_jacobian(theta.sigma_eta));
        },
        phi_scale, rng);
    theta.phi = 2.0 * phi_step.value - 1.0;
    current = phi_step.log_target;

    auto sigma_step = adaptive_rwm_scalar(
        std::log(theta.sigma_eta), current,
        [&](double ls) {
          const double s = std::exp(ls);
          return target({theta.mu, theta.phi, s}, log_sigma_jacobian(s));
        },
        sigma_scale, rng);
    theta.sigma_eta = std::exp(sigma_step.value);

    if (use_lik) tr.set(theta, table);

    if (it >= config.burn_in && (it - config.burn_in + 1) % config.thin == 0) {
      chain.draws(stored, 0) = theta.mu;
      chain.draws(stored, 1) = theta.phi;
      chain.draws(stored, 2) = theta.sigma_eta;
      for (std::size_t k = 0; k < chain.latent_names.size(); ++k) {
        chain.latent_draws(stored, static_cast<Index>(k)) = h[stored_idx[k]];
      }
      ++stored;
    }
    if (config.progress_every > 0 && (it + 1) % config.progress_every == 0) {
      std::cerr << "[irsv] iteration " << (it + 1) << "/" << config.n_iterations << "\n";
    }
  }

  double h_rate = 0.0;
  if (use_lik) {
    for (const auto& s : h_scale) h_rate += s.acceptance_rate();
    h_rate /= static_cast<double>(T);
    chain.acceptance.emplace_back("h", h_rate);
  }
  chain.acceptance.emplace_back("mu", mu_scale.acceptance_rate());
  chain.acceptance.emplace_back("phi", phi_scale.acceptance_rate());
  chain.acceptance.emplace_back("sigma", sigma_scale.acceptance_rate());

  FitResult result{std::move(chain), {}};
  result.summary = summarize(result.chain);
  return result;
}

}  // namespace irvol

#include <cmath>
#include <iostream>

#include "irvol/error.hpp"
#include "irvol/mcmc.hpp"
#include "state_chain.hpp"

namespace irvol {

namespace {

constexpr double kReturnFloor = 1e-12;
constexpr double kLogChiSqOffset = 1.27;

/// Per-asset prior terms on the sampling scale: mu, phi and log sigma.
double asset_prior(double mu, double phi, double sigma, const IrMsvPriors& priors, double phi_lo) {
  if (!(phi > phi_lo && phi < 1.0) || !(sigma > 0.0)) return kNegInf;
  return normal_log_density(mu, priors.mu_normal.mean, priors.mu_normal.variance) +
         normal_log_density(phi, priors.phi_normal.mean, priors.phi_normal.variance) +
         inverse_gamma_from_precision_log_density(sigma * sigma, priors.precision_gamma) +
         std::log(2.0 * sigma * sigma);
}

}  // namespace

FitResult fit_irmsv(const MatrixXd& returns, const Eigen::Ref<const VectorXd>& gaps,
                    const IrMsvPriors& priors, const McmcConfig& config) {
  config.validate();
  priors.validate();
  const Index p = returns.rows();
  const Index T = returns.cols();
  if (p < 2) throw DomainError("IR-MSV fit needs at least two assets");
  if (T < 10) throw DomainError("IR-MSV fit needs at least 10 observations");
  if (gaps.size() != T - 1) throw DomainError("need T - 1 gaps");
  if (!(gaps.array() > 0.0).all()) throw ZeroGapError("gaps must be positive");
  if (!(gaps.array() <= 1.0 + 1e-12).all()) {
    throw DomainError("gaps must be scaled into (0, 1] before fitting");
  }
  if (!returns.allFinite()) throw DomainError("returns must be finite");

  const detail::GapTable table(gaps);
  const bool use_lik = config.use_likelihood;
  const double phi_lo = use_lik ? 0.0 : -1.0;
  Rng rng(config.seed, config.chain_id);

  McmcChain chain;
  chain.model = "irmsv";
  chain.config = config;
  chain.param_names = irmsv_param_names(p);

  // Initial values.
  MatrixXd h = (returns.array().square() + kReturnFloor).log().matrix();
  VectorXd mu(p), phi = VectorXd::Constant(p, 0.5), sigma = VectorXd::Ones(p);
  for (Index i = 0; i < p; ++i) {
    double sum = 0.0;
    Index n = 0;
    for (Index j = 0; j < T; ++j) {
      if (returns(i, j) != 0.0) {
        sum += std::log(returns(i, j) * returns(i, j));
        ++n;
      }
    }
    if (n == 0) {
      chain.warnings.push_back("asset " + std::to_string(i + 1) + " has only zero returns");
      mu[i] = std::log(kReturnFloor) + kLogChiSqOffset;
    } else {
      mu[i] = sum / static_cast<double>(n) + kLogChiSqOffset;
    }
  }
  CorrelationMatrix R = CorrelationMatrix::identity(p);

  // u_ij = r_ij exp(-h_ij / 2): standardized returns entering the quadratic form.
  MatrixXd U = returns.array() * (-h.array() / 2.0).exp();

  std::vector<detail::Transition> tr(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) tr[static_cast<std::size_t>(i)].set({mu[i], phi[i], sigma[i]}, table);

  const auto stored_idx = detail::stored_state_indices(T, config.latent_stride, config.store_all_latent);
  if (use_lik) {
    for (Index i = 0; i < p; ++i) {
      for (Index j : stored_idx) {
        chain.latent_names.push_back("h_" + std::to_string(i + 1) + "[" + std::to_string(j + 1) + "]");
      }
    }
  }
  const Index n_store = config.stored_draws();
  chain.draws.resize(n_store, static_cast<Index>(chain.param_names.size()));
  chain.latent_draws.resize(n_store, static_cast<Index>(chain.latent_names.size()));

  const double ts = config.target_accept_scalar;
  const Index ai = config.adapt_interval;
  std::vector<AdaptiveScale> h_scale(static_cast<std::size_t>(p * T), AdaptiveScale(1.0, ts, ai));
  std::vector<AdaptiveScale> mu_scale(static_cast<std::size_t>(p), AdaptiveScale(0.1, ts, ai));
  std::vector<AdaptiveScale> phi_scale(static_cast<std::size_t>(p), AdaptiveScale(0.1, ts, ai));
  std::vector<AdaptiveScale> sigma_scale(static_cast<std::size_t>(p), AdaptiveScale(0.1, ts, ai));
  AdaptiveScale r_scale(0.05, config.target_accept_block, ai);

  auto freeze_all = [&] {
    for (auto* group : {&h_scale, &mu_scale, &phi_scale, &sigma_scale}) {
      for (auto& s : *group) {
        s.freeze();
        s.reset_counts();
      }
    }
    r_scale.freeze();
    r_scale.reset_counts();
  };

  auto asset_state_ll = [&](Index i, double m, double ph, double sg) {
    if (!use_lik) return 0.0;
    detail::Transition t;
    t.set({m, ph, sg}, table);
    auto path = [&h, i](Index j) { return h(i, j); };
    return detail::state_log_likelihood(path, T, t, table);
  };

  // log target of R: LKJ term plus the part of the joint observation density that depends on R.
  auto r_target = [&](const CorrelationMatrix& cand, const MatrixXd& S) {
    double lt = (priors.lkj_eta - 1.0) * cand.log_det();
    if (use_lik) {
      lt -= 0.5 * static_cast<double>(T) * cand.log_det();
      lt -= 0.5 * (cand.inverse().cwiseProduct(S)).sum();
    }
    return lt;
  };

  Index stored = 0;
  for (Index it = 0; it < config.n_iterations; ++it) {
    if (it == config.burn_in) freeze_all();

    if (use_lik) {
      const MatrixXd& Q = R.inverse();
      for (Index j = 0; j < T; ++j) {
        for (Index i = 0; i < p; ++i) {
          const double u_i = U(i, j);
          const double qu_i = Q.row(i).dot(U.col(j));
          const double q_ii = Q(i, i);
          const double r_ij = returns(i, j);
          const auto& tri = tr[static_cast<std::size_t>(i)];
          auto path = [&h, i](Index jj) { return h(i, jj); };
          // Quadratic form change when only u_i moves: 2 d (Qu)_i + Q_ii d^2.
          auto site = [&](double x) {
            const double d = r_ij * std::exp(-x / 2.0) - u_i;
            const double dquad = 2.0 * d * qu_i + q_ii * d * d;
            return -0.5 * (x + dquad) + detail::state_site_log_prior(x, j, path, T, tri, table);
          };
          auto& sc = h_scale[static_cast<std::size_t>(i * T + j)];
          const double current = -0.5 * h(i, j) + detail::state_site_log_prior(h(i, j), j, path, T, tri, table);
          const auto step = adaptive_rwm_scalar(h(i, j), current, site, sc, rng);
          if (step.accepted) {
            h(i, j) = step.value;
            U(i, j) = r_ij * std::exp(-step.value / 2.0);
          }
        }
      }
    }

    for (Index i = 0; i < p; ++i) {
      auto target = [&](double m, double ph, double sg) {
        const double lp = asset_prior(m, ph, sg, priors, phi_lo);
        if (lp == kNegInf) return kNegInf;
        return lp + asset_state_ll(i, m, ph, sg);
      };
      const auto si = static_cast<std::size_t>(i);
      double current = target(mu[i], phi[i], sigma[i]);
      auto ms = adaptive_rwm_scalar(mu[i], current, [&](double m) { return target(m, phi[i], sigma[i]); },
                                    mu_scale[si], rng);
      mu[i] = ms.value;
      current = ms.log_target;
      auto ps = adaptive_rwm_scalar(phi[i], current, [&](double ph) { return target(mu[i], ph, sigma[i]); },
                                    phi_scale[si], rng);
      phi[i] = ps.value;
      current = ps.log_target;
      auto ss = adaptive_rwm_scalar(
          std::log(sigma[i]), current, [&](double ls) { return target(mu[i], phi[i], std::exp(ls)); },
          sigma_scale[si], rng);
      sigma[i] = std::exp(ss.value);
      tr[si].set({mu[i], phi[i], sigma[i]}, table);
    }

    {
      const MatrixXd S = use_lik ? MatrixXd(U * U.transpose()) : MatrixXd::Zero(p, p);
      auto bs = correlation_block_step(R, r_target(R, S), [&](const CorrelationMatrix& c) { return r_target(c, S); },
                                       r_scale, rng);
      if (bs.accepted) R = std::move(bs.R);
    }

    if (it >= config.burn_in && (it - config.burn_in + 1) % config.thin == 0) {
      Index c = 0;
      for (Index i = 0; i < p; ++i) chain.draws(stored, c++) = mu[i];
      for (Index i = 0; i < p; ++i) chain.draws(stored, c++) = phi[i];
      for (Index i = 0; i < p; ++i) chain.draws(stored, c++) = sigma[i];
      const VectorXd lower = R.lower();
      for (Index k = 0; k < lower.size(); ++k) chain.draws(stored, c++) = lower[k];
      if (use_lik) {
        Index l = 0;
        for (Index i = 0; i < p; ++i) {
          for (Index j : stored_idx) chain.latent_draws(stored, l++) = h(i, j);
        }
      }
      ++stored;
    }
    if (config.progress_every > 0 && (it + 1) % config.progress_every == 0) {
      std::cerr << "[irmsv] iteration " << (it + 1) << "/" << config.n_iterations << "\n";
    }
  }

  if (use_lik) {
    double rate = 0.0;
    for (const auto& s : h_scale) rate += s.acceptance_rate();
    chain.acceptance.emplace_back("h", rate / static_cast<double>(h_scale.size()));
  }
  for (Index i = 0; i < p; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const std::string n = std::to_string(i + 1);
    chain.acceptance.emplace_back("mu_" + n, mu_scale[si].acceptance_rate());
    chain.acceptance.emplace_back("phi_" + n, phi_scale[si].acceptance_rate());
    chain.acceptance.emplace_back("sigma_" + n, sigma_scale[si].acceptance_rate());
  }
  chain.acceptance.emplace_back("R", r_scale.acceptance_rate());

  FitResult result{std::move(chain), {}};
  result.summary = summarize(result.chain);
  return result;
}

}  // namespace irvol

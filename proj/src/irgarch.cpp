#include "irvol/irgarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "irvol/error.hpp"
#include "irvol/optimize.hpp"
#include "irvol/stats.hpp"

namespace irvol {

namespace {

constexpr double kFirstGap = 1.0;
const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

double logit(double x) { return std::log(x / (1.0 - x)); }
double inv_logit(double y) { return 1.0 / (1.0 + std::exp(-y)); }

void check_lengths(const Eigen::Ref<const VectorXd>& returns, const Eigen::Ref<const VectorXd>& gaps) {
  if (returns.size() < 1) throw DomainError("empty return series");
  if (gaps.size() != returns.size() - 1) throw DomainError("need one gap fewer than returns");
  if (!(gaps.array() > 0.0).all()) throw ZeroGapError("gaps must be positive");
}

// Recursion shared by simulation and filtering. `next_return(j, sigma2)`
// yields r_j once sigma2_j is known.
template <class NextReturn>
void garch_recursion(const IrGarchParams& p, const Eigen::Ref<const VectorXd>& gaps, Index length,
                     VectorXd& sigma2, NextReturn&& next_return) {
  sigma2.resize(length);
  double s2 = p.omega * (1.0 - std::pow(p.alpha1, kFirstGap) - std::pow(p.beta1, kFirstGap));
  sigma2[0] = s2;
  double r_prev = next_return(0, s2);
  for (Index j = 1; j < length; ++j) {
    const double g = gaps[j - 1];
    const double ag = std::pow(p.alpha1, g);
    const double bg = std::pow(p.beta1, g);
    s2 = p.omega * (1.0 - ag - bg) + ag * r_prev * r_prev + bg * s2;
    sigma2[j] = s2;
    r_prev = next_return(j, s2);
  }
}

}  // namespace

double constraint_gap(const Eigen::Ref<const VectorXd>& gaps) {
  return gaps.size() == 0 ? kFirstGap : std::min(kFirstGap, gaps.minCoeff());
}

bool is_feasible(const IrGarchParams& p, double g_star) {
  if (!(std::isfinite(p.omega) && std::isfinite(p.alpha1) && std::isfinite(p.beta1))) return false;
  if (!(p.omega > 0.0 && p.alpha1 > 0.0 && p.beta1 >= 0.0)) return false;
  return std::pow(p.alpha1, g_star) + std::pow(p.beta1, g_star) < 1.0;
}

void validate(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& gaps) {
  if (!(params.omega > 0.0)) throw ParameterError("omega must be positive");
  if (!(params.alpha1 > 0.0)) throw ParameterError("alpha1 must be positive");
  if (!(params.beta1 >= 0.0)) throw ParameterError("beta1 must be nonnegative");
  if (!is_feasible(params, constraint_gap(gaps))) {
    throw ParameterError("alpha1^g* + beta1^g* must be below 1");
  }
}

IrGarchPath simulate_irgarch(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& gaps, Index length,
                             Rng& rng) {
  if (length < 1) throw DomainError("length must be positive");
  if (gaps.size() != length - 1) throw DomainError("need length - 1 gaps");
  if (!(gaps.array() > 0.0).all()) throw ZeroGapError("gaps must be positive");
  validate(params, gaps);
  IrGarchPath path;
  path.returns.resize(length);
  garch_recursion(params, gaps, length, path.sigma2, [&](Index j, double s2) {
    path.returns[j] = std::sqrt(s2) * rng.normal();
    return path.returns[j];
  });
  return path;
}

IrGarchPath simulate_irgarch(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& gaps, Index length,
                             std::uint64_t seed) {
  Rng rng(seed);
  return simulate_irgarch(params, gaps, length, rng);
}

IrGarchPath simulate_irarch(double omega, double alpha1, const Eigen::Ref<const VectorXd>& gaps, Index length,
                            Rng& rng) {
  return simulate_irgarch({omega, alpha1, 0.0}, gaps, length, rng);
}

IrGarchPath simulate_irarch(double omega, double alpha1, const Eigen::Ref<const VectorXd>& gaps, Index length,
                            std::uint64_t seed) {
  Rng rng(seed);
  return simulate_irarch(omega, alpha1, gaps, length, rng);
}

VectorXd filter_sigma2(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& returns,
                       const Eigen::Ref<const VectorXd>& gaps) {
  check_lengths(returns, gaps);
  validate(params, gaps);
  VectorXd sigma2;
  garch_recursion(params, gaps, returns.size(), sigma2, [&](Index j, double) { return returns[j]; });
  return sigma2;
}

double conditional_loglik(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& returns,
                          const Eigen::Ref<const VectorXd>& gaps) {
  check_lengths(returns, gaps);
  if (!is_feasible(params, constraint_gap(gaps))) return -std::numeric_limits<double>::infinity();
  VectorXd sigma2;
  garch_recursion(params, gaps, returns.size(), sigma2, [&](Index j, double) { return returns[j]; });
  double ll = 0.0;
  for (Index j = 1; j < returns.size(); ++j) {
    const double s2 = sigma2[j];
    if (!(s2 > 0.0)) return -std::numeric_limits<double>::infinity();
    ll -= 0.5 * (kLogTwoPi + std::log(s2) + returns[j] * returns[j] / s2);
  }
  return ll;
}

namespace {

IrGarchParams from_unconstrained(const Eigen::VectorXd& x, bool arch_only) {
  return {std::exp(x[0]), inv_logit(x[1]), arch_only ? 0.0 : inv_logit(x[2])};
}

Eigen::VectorXd to_unconstrained(const IrGarchParams& p, bool arch_only) {
  Eigen::VectorXd x(arch_only ? 2 : 3);
  x[0] = std::log(p.omega);
  x[1] = logit(p.alpha1);
  if (!arch_only) x[2] = logit(p.beta1);
  return x;
}

// Observed-information standard errors in the natural parameterization.
Eigen::Vector3d standard_errors(const IrGarchParams& est, bool arch_only, const Eigen::Ref<const VectorXd>& r,
                                const Eigen::Ref<const VectorXd>& g) {
  Eigen::Vector3d se = Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN());
  const int n = arch_only ? 2 : 3;
  Eigen::VectorXd theta(n);
  theta << est.omega, est.alpha1;
  if (!arch_only) theta[2] = est.beta1;
  auto ll = [&](const Eigen::VectorXd& t) {
    return conditional_loglik({t[0], t[1], arch_only ? 0.0 : t[2]}, r, g);
  };
  Eigen::VectorXd step = (theta.array().abs() * 1e-4).max(1e-7);
  Eigen::MatrixXd H(n, n);
  const double f0 = ll(theta);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Eigen::VectorXd pp = theta, pm = theta, mp = theta, mm = theta;
      pp[a] += step[a];
      pp[b] += step[b];
      pm[a] += step[a];
      pm[b] -= step[b];
      mp[a] -= step[a];
      mp[b] += step[b];
      mm[a] -= step[a];
      mm[b] -= step[b];
      double v;
      if (a == b) {
        Eigen::VectorXd p1 = theta, m1 = theta;
        p1[a] += step[a];
        m1[a] -= step[a];
        v = (ll(p1) - 2.0 * f0 + ll(m1)) / (step[a] * step[a]);
      } else {
        v = (ll(pp) - ll(pm) - ll(mp) + ll(mm)) / (4.0 * step[a] * step[b]);
      }
      H(a, b) = H(b, a) = v;
    }
  }
  if (!H.allFinite()) return se;
  Eigen::LLT<Eigen::MatrixXd> llt(-H);
  if (llt.info() != Eigen::Success) return se;
  const Eigen::VectorXd var = llt.solve(Eigen::MatrixXd::Identity(n, n)).diagonal();
  for (int a = 0; a < n; ++a) se[a] = std::sqrt(var[a]);
  if (arch_only) se[2] = 0.0;
  return se;
}

}  // namespace

MlFit fit_ml(const Eigen::Ref<const VectorXd>& returns, const Eigen::Ref<const VectorXd>& gaps,
             const MlOptions& options) {
  check_lengths(returns, gaps);
  if (returns.size() < 50) throw DomainError("ML fit needs at least 50 observations");
  if (options.n_starts < 1) throw ConfigError("need at least one start");
  const double g_star = constraint_gap(gaps);
  const bool arch = options.arch_only;

  // Start points: the supplied one (or a moment-based default) then random
  // feasible perturbations, each from its own stream.
  const double var_r = std::max(sample_variance(returns), 1e-12);
  std::vector<IrGarchParams> starts;
  IrGarchParams first = options.start.value_or(IrGarchParams{var_r, 0.3, arch ? 0.0 : 0.3});
  if (arch) first.beta1 = 0.0;
  starts.push_back(first);
  for (int k = 1; k < options.n_starts; ++k) {
    Rng rng(options.seed, static_cast<std::uint64_t>(k));
    IrGarchParams s;
    for (int tries = 0; tries < 1000; ++tries) {
      s.omega = var_r * std::exp(0.5 * rng.normal());
      s.alpha1 = 0.02 + 0.93 * rng.uniform();
      s.beta1 = arch ? 0.0 : 0.02 + 0.93 * rng.uniform();
      if (is_feasible(s, g_star)) break;
    }
    starts.push_back(s);
  }

  const auto objective = [&](const Eigen::VectorXd& x) {
    const IrGarchParams p = from_unconstrained(x, arch);
    const double ll = conditional_loglik(p, returns, gaps);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };

  std::vector<MlStartReport> reports(starts.size());
  auto run_start = [&](std::size_t k) {
    MlStartReport& rep = reports[k];
    rep.start = starts[k];
    if (!is_feasible(starts[k], g_star) || starts[k].alpha1 >= 1.0 || starts[k].beta1 >= 1.0) {
      rep.loglik = -std::numeric_limits<double>::infinity();
      return;
    }
    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    nm.diameter_tolerance = options.diameter_tolerance;
    const auto res = nelder_mead(objective, to_unconstrained(starts[k], arch), nm);
    rep.estimate = from_unconstrained(res.x, arch);
    rep.loglik = -res.value;
    rep.iterations = res.iterations;
    rep.converged = res.converged;
    rep.diameter = res.diameter;
  };

  const std::size_t n_threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), 1, starts.size());
  if (n_threads == 1) {
    for (std::size_t k = 0; k < starts.size(); ++k) run_start(k);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t k = t; k < starts.size(); k += n_threads) run_start(k);
      });
    }
    for (auto& th : pool) th.join();
  }

  MlFit fit;
  fit.loglik = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    if (std::isfinite(reports[k].loglik) && reports[k].loglik > fit.loglik) {
      fit.loglik = reports[k].loglik;
      fit.best_start = k;
    }
  }
  if (!std::isfinite(fit.loglik)) throw NumericalError("all optimizer starts were infeasible");
  fit.params = reports[fit.best_start].estimate;
  fit.converged = reports[fit.best_start].converged;
  fit.starts = std::move(reports);
  fit.std_errors = standard_errors(fit.params, arch, returns, gaps);
  return fit;
}

}  // namespace irvol

#include "irvol/irsv.hpp"

#include <algorithm>
#include <cmath>

#include "irvol/stats.hpp"

namespace irvol {

namespace {

void check_persistence(double phi) {
  if (!(std::abs(phi) < 1.0)) throw ParameterError("|phi| must be < 1");
  if (!(phi > 0.0)) throw ParameterError("phi must be in (0, 1); negative persistence is unsupported");
}

}  // namespace

void validate(const IrSvParams& params) {
  check_persistence(params.phi);
  if (!(params.sigma_eta > 0.0)) throw ParameterError("sigma_eta must be positive");
  if (!std::isfinite(params.mu)) throw ParameterError("mu must be finite");
}

void validate_allow_degenerate(const IrSvParams& params) {
  check_persistence(params.phi);
  if (!(params.sigma_eta >= 0.0)) throw ParameterError("sigma_eta must be nonnegative");
  if (!std::isfinite(params.mu)) throw ParameterError("mu must be finite");
}

IrSvPath simulate_irsv(const IrSvParams& params, const Eigen::Ref<const VectorXd>& gaps,
                       Index length, Rng& rng) {
  validate(params);
  if (length < 1) throw DomainError("length must be at least 1");
  if (gaps.size() < length - 1) throw DomainError("not enough gaps for the requested length");

  const double mu = params.mu;
  const double phi = params.phi;
  const double sigma = params.sigma_eta;

  IrSvPath path{VectorXd(length), VectorXd(length)};
  double h = mu + sigma / std::sqrt(1.0 - phi * phi) * rng.normal();
  path.h[0] = h;
  path.returns[0] = std::exp(h / 2.0) * rng.normal();
  for (Index j = 1; j < length; ++j) {
    const double g = gaps[j - 1];
    if (!(g > 0.0)) throw ZeroGapError("gaps must be positive");
    const double a = std::pow(phi, g);
    const double sd = sigma * std::sqrt(innovation_variance_ratio(phi, g));
    h = mu + a * (h - mu) + sd * rng.normal();
    path.h[j] = h;
    path.returns[j] = std::exp(h / 2.0) * rng.normal();
  }
  return path;
}

IrSvPath simulate_irsv(const IrSvParams& params, const ScaledGaps& gaps, Index length,
                       std::uint64_t seed) {
  Rng rng(seed);
  return simulate_irsv(params, gaps.gaps, length, rng);
}

void simulate_forward(const IrSvParams& params, double last_h,
                      const Eigen::Ref<const VectorXd>& future_gaps, Rng& rng,
                      Eigen::Ref<VectorXd> h_out, Eigen::Ref<VectorXd> r_out) {
  double h = last_h;
  for (Index k = 0; k < future_gaps.size(); ++k) {
    const double g = future_gaps[k];
    const double a = std::pow(params.phi, g);
    const double sd = params.sigma_eta * std::sqrt(innovation_variance_ratio(params.phi, g));
    h = params.mu + a * (h - params.mu) + sd * rng.normal();
    h_out[k] = h;
    r_out[k] = std::exp(h / 2.0) * rng.normal();
  }
}

std::vector<HorizonSummary> summarize_forecast_draws(const MatrixXd& h_draws,
                                                     const MatrixXd& r_draws) {
  std::vector<HorizonSummary> out;
  out.reserve(static_cast<std::size_t>(h_draws.cols()));
  for (Index k = 0; k < h_draws.cols(); ++k) {
    const VectorXd h = h_draws.col(k);
    const VectorXd var = h.array().exp();
    const VectorXd r = r_draws.col(k);
    HorizonSummary s;
    s.step = k + 1;
    s.h_mean = h.mean();
    s.h_lo = quantile(h, 0.025);
    s.h_hi = quantile(h, 0.975);
    s.var_mean = var.mean();
    s.var_lo = quantile(var, 0.025);
    s.var_hi = quantile(var, 0.975);
    s.vol_mean = (h.array() / 2.0).exp().mean();
    s.r2_mean = r.array().square().mean();
    s.abs_r_mean = r.array().abs().mean();
    out.push_back(s);
  }
  return out;
}

std::vector<HorizonSummary> forecast(const IrSvParams& params, double last_h,
                                     const Eigen::Ref<const VectorXd>& future_gaps,
                                     Index n_draws, Rng& rng) {
  validate_allow_degenerate(params);
  if (future_gaps.size() == 0) throw DomainError("no forecast gaps given");
  if (n_draws < 1) throw DomainError("n_draws must be at least 1");
  if (!(future_gaps.array() > 0.0).all()) throw ZeroGapError("forecast gaps must be positive");

  const Index steps = future_gaps.size();
  MatrixXd h(n_draws, steps);
  MatrixXd r(n_draws, steps);
  VectorXd h_row(steps);
  VectorXd r_row(steps);
  for (Index d = 0; d < n_draws; ++d) {
    simulate_forward(params, last_h, future_gaps, rng, h_row, r_row);
    h.row(d) = h_row.transpose();
    r.row(d) = r_row.transpose();
  }
  return summarize_forecast_draws(h, r);
}

}  // namespace irvol

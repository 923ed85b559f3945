#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "irvol/error.hpp"
#include "irvol/mcmc.hpp"
#include "irvol/stats.hpp"

namespace irvol {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(const Eigen::Ref<const Eigen::VectorXd>& x, double p) {
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, p);
}

double sample_variance(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() < 2) return 0.0;
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

namespace {

/// Autocovariances (biased, divided by n) at lags 0..n-1 via zero-padded FFT.
std::vector<double> autocovariance(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  const double mean = x.mean();
  std::vector<double> padded(m, 0.0);
  for (std::size_t t = 0; t < n; ++t) padded[t] = x[static_cast<Index>(t)] - mean;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, padded);
  for (auto& c : freq) c = std::complex<double>(std::norm(c), 0.0);
  std::vector<double> acov;
  fft.inv(acov, freq);
  acov.resize(n);
  for (auto& a : acov) a /= static_cast<double>(n);
  return acov;
}

}  // namespace

double effective_sample_size(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Index n = x.size();
  if (n < 4) return static_cast<double>(n);
  const auto acov = autocovariance(x);
  if (!(acov[0] > 0.0)) return static_cast<double>(n);
  double tau = -1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < acov.size(); ++m) {
    double pair = (acov[2 * m] + acov[2 * m + 1]) / acov[0];
    if (!(pair > 0.0)) break;
    pair = std::min(pair, prev_pair);
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  tau = std::max(tau, 1.0 / static_cast<double>(n));
  return static_cast<double>(n) / tau;
}

PosteriorSummary summarize(const McmcChain& chain, double prob_lo, double prob_hi) {
  if (chain.n_draws() == 0) throw DomainError("cannot summarize an empty chain");
  if (!(prob_lo < prob_hi)) throw DomainError("quantile probabilities must be increasing");
  PosteriorSummary summary;
  summary.prob_lo = prob_lo;
  summary.prob_hi = prob_hi;
  for (std::size_t k = 0; k < chain.param_names.size(); ++k) {
    const VectorXd col = chain.draws.col(static_cast<Index>(k));
    std::vector<double> sorted(col.data(), col.data() + col.size());
    std::sort(sorted.begin(), sorted.end());
    ParameterSummary s;
    s.name = chain.param_names[k];
    s.mean = col.mean();
    s.sd = std::sqrt(sample_variance(col));
    s.q_lo = quantile_sorted(sorted, prob_lo);
    s.q_hi = quantile_sorted(sorted, prob_hi);
    s.ess = effective_sample_size(col);
    summary.parameters.push_back(std::move(s));
  }
  return summary;
}

}  // namespace irvol

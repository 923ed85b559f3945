#include "irvol/core.hpp"

#include <cmath>

#include "irvol/error.hpp"

namespace irvol {

namespace {

void check_strictly_increasing(const Eigen::Ref<const VectorXd>& t) {
  for (Index j = 1; j < t.size(); ++j) {
    if (t[j] == t[j - 1]) {
      throw ZeroGapError("duplicate timestamp at index " + std::to_string(j));
    }
    if (!(t[j] > t[j - 1])) {
      throw OrderingError("timestamps not increasing at index " + std::to_string(j));
    }
  }
}

}  // namespace

void TickSeries::validate(Index min_length) const {
  if (timestamps.size() != prices.size()) {
    throw DomainError("tick series '" + asset_id + "': timestamp/price length mismatch");
  }
  if (timestamps.size() < min_length) {
    throw DomainError("tick series '" + asset_id + "' has fewer than " +
                      std::to_string(min_length) + " ticks");
  }
  check_strictly_increasing(timestamps);
  for (Index j = 0; j < prices.size(); ++j) {
    if (!(prices[j] > 0.0)) throw DomainError("tick series '" + asset_id + "': nonpositive price");
  }
}

GapSeries GapSeries::from_timestamps(const Eigen::Ref<const VectorXd>& timestamps,
                                     const Eigen::Ref<const VectorXd>& values) {
  if (timestamps.size() != values.size()) throw DomainError("timestamp/value length mismatch");
  GapSeries s;
  s.timestamps = timestamps;
  s.values = values;
  s.gaps = compute_gaps(timestamps);
  return s;
}

GapSeries GapSeries::from_gaps(const Eigen::Ref<const VectorXd>& gaps,
                               const Eigen::Ref<const VectorXd>& values, double t0) {
  if (gaps.size() + 1 != values.size()) throw DomainError("need exactly one gap fewer than values");
  GapSeries s;
  s.timestamps = timestamps_from_gaps(gaps, t0);
  s.values = values;
  s.gaps = gaps;
  s.validate();
  return s;
}

void GapSeries::validate() const {
  if (timestamps.size() != values.size()) throw DomainError("timestamp/value length mismatch");
  if (values.size() >= 1 && gaps.size() != values.size() - 1) {
    throw DomainError("gap count must be one less than the series length");
  }
  for (Index j = 0; j < gaps.size(); ++j) {
    if (!(gaps[j] > 0.0)) throw ZeroGapError("nonpositive gap at index " + std::to_string(j));
    if (std::abs(timestamps[j + 1] - timestamps[j] - gaps[j]) > kTimeTolerance) {
      throw DomainError("gaps inconsistent with timestamps at index " + std::to_string(j));
    }
  }
}

VectorXd compute_gaps(const Eigen::Ref<const VectorXd>& timestamps) {
  if (timestamps.size() < 2) throw DomainError("need at least two timestamps");
  check_strictly_increasing(timestamps);
  const Index n = timestamps.size();
  return timestamps.tail(n - 1) - timestamps.head(n - 1);
}

ScaledGaps scale_gaps(const Eigen::Ref<const VectorXd>& gaps) {
  if (gaps.size() == 0) throw DomainError("cannot scale an empty gap series");
  if (!(gaps.array() > 0.0).all()) throw ZeroGapError("gaps must be positive");
  const double max_gap = gaps.maxCoeff();
  return ScaledGaps{gaps / max_gap, max_gap};
}

VectorXd log_returns(const Eigen::Ref<const VectorXd>& prices) {
  if (prices.size() < 2) throw DomainError("need at least two prices");
  if (!(prices.array() > 0.0).all()) throw DomainError("prices must be positive");
  const Index n = prices.size();
  VectorXd r(n - 1);
  for (Index j = 1; j < n; ++j) r[j - 1] = std::log(prices[j]) - std::log(prices[j - 1]);
  return r;
}

VectorXd generate_poisson_gaps(Index count, double mean, Rng& rng) {
  if (count < 1) throw DomainError("gap count must be at least 1");
  if (!(mean > 0.0)) throw ParameterError("Poisson mean must be positive");
  VectorXd g(count);
  for (Index j = 0; j < count; ++j) {
    long k = 0;
    while (k == 0) k = rng.poisson(mean);
    g[j] = static_cast<double>(k);
  }
  return g;
}

ScaledGaps generate_gaps(Index count, double mean, Rng& rng) {
  return scale_gaps(generate_poisson_gaps(count, mean, rng));
}

ScaledGaps generate_gaps(Index count, double mean, std::uint64_t seed) {
  Rng rng(seed);
  return generate_gaps(count, mean, rng);
}

VectorXd timestamps_from_gaps(const Eigen::Ref<const VectorXd>& gaps, double t0) {
  VectorXd t(gaps.size() + 1);
  t[0] = t0;
  for (Index j = 0; j < gaps.size(); ++j) t[j + 1] = t[j] + gaps[j];
  return t;
}

}  // namespace irvol

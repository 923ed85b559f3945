#ifndef IRVOL_CORE_HPP
#define IRVOL_CORE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "irvol/random.hpp"

namespace irvol {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Absolute tolerance for timestamp/gap consistency (seconds).
inline constexpr double kTimeTolerance = 1e-9;

/// Raw tick prices of one asset. Timestamps are fractional seconds since an epoch.
struct TickSeries {
  std::string asset_id;
  VectorXd timestamps;
  VectorXd prices;

  Index size() const { return timestamps.size(); }

  /// Throws OrderingError/ZeroGapError/DomainError when an invariant fails.
  /// `min_length` is 2 for return computation, 1 for synchronization inputs.
  void validate(Index min_length = 2) const;
};

/// One irregularly spaced series: values observed at t_1 < ... < t_T, with
/// gaps g_j = t_j - t_{j-1} (length T-1, the first observation has no gap).
struct GapSeries {
  VectorXd timestamps;
  VectorXd values;
  VectorXd gaps;

  Index size() const { return values.size(); }

  static GapSeries from_timestamps(const Eigen::Ref<const VectorXd>& timestamps,
                                   const Eigen::Ref<const VectorXd>& values);
  static GapSeries from_gaps(const Eigen::Ref<const VectorXd>& gaps,
                             const Eigen::Ref<const VectorXd>& values, double t0 = 0.0);
  void validate() const;
};

/// Gaps divided by a positive scale so that every gap lies in (0, 1].
struct ScaledGaps {
  VectorXd gaps;
  double scale_factor = 1.0;
};

VectorXd compute_gaps(const Eigen::Ref<const VectorXd>& timestamps);

/// Divides by the largest gap. Already-scaled input comes back unchanged.
ScaledGaps scale_gaps(const Eigen::Ref<const VectorXd>& gaps);

VectorXd log_returns(const Eigen::Ref<const VectorXd>& prices);

/// Zero-truncated Poisson(mean) gap counts (zeros are redrawn), unscaled.
VectorXd generate_poisson_gaps(Index count, double mean, Rng& rng);

/// Zero-truncated Poisson(mean) gaps scaled into (0, 1].
ScaledGaps generate_gaps(Index count, double mean, Rng& rng);
ScaledGaps generate_gaps(Index count, double mean, std::uint64_t seed);

/// Cumulative sum of gaps starting at t0; inverse of compute_gaps.
VectorXd timestamps_from_gaps(const Eigen::Ref<const VectorXd>& gaps, double t0 = 0.0);

}  // namespace irvol

#endif  // IRVOL_CORE_HPP

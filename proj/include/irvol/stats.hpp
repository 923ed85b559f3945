#ifndef IRVOL_STATS_HPP
#define IRVOL_STATS_HPP

#include <Eigen/Dense>

#include <span>

namespace irvol {

/// Linear-interpolation quantile of sorted data: position (n - 1) p.
double quantile_sorted(std::span<const double> sorted, double p);

/// Quantile of unsorted data (copies and sorts).
double quantile(const Eigen::Ref<const Eigen::VectorXd>& x, double p);

/// Effective sample size using Geyer's initial monotone sequence estimator of
/// the integrated autocorrelation time. Returns n for a constant series.
double effective_sample_size(const Eigen::Ref<const Eigen::VectorXd>& x);

double sample_variance(const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace irvol

#endif  // IRVOL_STATS_HPP

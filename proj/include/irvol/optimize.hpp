#ifndef IRVOL_OPTIMIZE_HPP
#define IRVOL_OPTIMIZE_HPP

#include <Eigen/Dense>

#include <functional>

namespace irvol {

struct NelderMeadOptions {
  int max_iterations = 2000;
  /// Converged once the largest vertex distance from the best vertex drops below this.
  double diameter_tolerance = 1e-8;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double diameter = 0.0;
};

/// Derivative-free minimization (standard reflection/expansion/contraction/shrink
/// coefficients 1, 2, 1/2, 1/2). The objective may return +inf for infeasible points.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const NelderMeadOptions& options = {});

}  // namespace irvol

#endif  // IRVOL_OPTIMIZE_HPP

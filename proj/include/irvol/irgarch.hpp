#ifndef IRVOL_IRGARCH_HPP
#define IRVOL_IRGARCH_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "irvol/core.hpp"
#include "irvol/random.hpp"

namespace irvol {

/// IR-GARCH(1,1):
///   sigma2_1 = omega (1 - alpha^{g_1} - beta^{g_1}),  g_1 = 1
///   sigma2_j = omega (1 - alpha^{g_j} - beta^{g_j}) + alpha^{g_j} r_{j-1}^2 + beta^{g_j} sigma2_{j-1}
/// IR-ARCH(1) is the special case beta1 = 0.
struct IrGarchParams {
  double omega = 0.0;
  double alpha1 = 0.0;
  double beta1 = 0.0;
};

/// Smallest exponent entering the constraint: min(1, min gap), the 1 coming
/// from the fixed first-observation gap.
double constraint_gap(const Eigen::Ref<const VectorXd>& gaps);

bool is_feasible(const IrGarchParams& params, double g_star);

/// Throws ParameterError unless omega > 0, alpha1 > 0, beta1 >= 0 and
/// alpha1^g* + beta1^g* < 1.
void validate(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& gaps);

struct IrGarchPath {
  VectorXd sigma2;
  VectorXd returns;
};

/// `gaps` has length - 1 entries (gap j precedes observation j + 1).
IrGarchPath simulate_irgarch(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& gaps, Index length,
                             Rng& rng);
IrGarchPath simulate_irgarch(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& gaps, Index length,
                             std::uint64_t seed);
IrGarchPath simulate_irarch(double omega, double alpha1, const Eigen::Ref<const VectorXd>& gaps, Index length,
                            Rng& rng);
IrGarchPath simulate_irarch(double omega, double alpha1, const Eigen::Ref<const VectorXd>& gaps, Index length,
                            std::uint64_t seed);

VectorXd filter_sigma2(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& returns,
                       const Eigen::Ref<const VectorXd>& gaps);

/// Gaussian log-likelihood summed over j = 2..n. Returns -inf for infeasible
/// parameters instead of throwing.
double conditional_loglik(const IrGarchParams& params, const Eigen::Ref<const VectorXd>& returns,
                          const Eigen::Ref<const VectorXd>& gaps);

struct MlOptions {
  int n_starts = 5;
  int threads = 1;
  std::uint64_t seed = 1;
  /// Fix beta1 = 0 (IR-ARCH).
  bool arch_only = false;
  std::optional<IrGarchParams> start;
  int max_iterations = 2000;
  double diameter_tolerance = 1e-8;
};

struct MlStartReport {
  IrGarchParams start;
  IrGarchParams estimate;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  double diameter = 0.0;
};

struct MlFit {
  IrGarchParams params;
  double loglik = 0.0;
  bool converged = false;
  /// Asymptotic standard errors of (omega, alpha1, beta1) from the observed
  /// information; NaN where the Hessian is not negative definite.
  Eigen::Vector3d std_errors = Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN());
  std::size_t best_start = 0;
  std::vector<MlStartReport> starts;
};

MlFit fit_ml(const Eigen::Ref<const VectorXd>& returns, const Eigen::Ref<const VectorXd>& gaps,
             const MlOptions& options = {});

}  // namespace irvol

#endif  // IRVOL_IRGARCH_HPP

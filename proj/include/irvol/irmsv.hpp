#ifndef IRVOL_IRMSV_HPP
#define IRVOL_IRMSV_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "irvol/core.hpp"
#include "irvol/irsv.hpp"
#include "irvol/random.hpp"

namespace irvol {

/// Symmetric positive-definite matrix with unit diagonal. Holds its Cholesky
/// factor, inverse and log-determinant so densities need no refactorization.
class CorrelationMatrix {
 public:
  /// Throws MatrixError unless `entries` is square, symmetric to 1e-12, has an
  /// exact unit diagonal and is positive definite (min eigenvalue > 1e-10).
  explicit CorrelationMatrix(const MatrixXd& entries);

  static CorrelationMatrix identity(Index p);

  /// Builds from the strictly-lower correlations in row-major order
  /// (rho_21, rho_31, rho_32, ...).
  static CorrelationMatrix from_lower(Index p, const Eigen::Ref<const VectorXd>& lower);

  /// Non-throwing construction for proposals; std::nullopt when invalid.
  static std::optional<CorrelationMatrix> try_make(const MatrixXd& entries);

  const MatrixXd& matrix() const { return m_; }
  const MatrixXd& inverse() const { return inverse_; }
  const MatrixXd& lower_factor() const { return lower_; }
  double log_det() const { return log_det_; }
  Index dim() const { return m_.rows(); }
  double operator()(Index i, Index k) const { return m_(i, k); }

  /// Strictly-lower entries in row-major order.
  VectorXd lower() const;

 private:
  CorrelationMatrix() = default;
  static std::optional<CorrelationMatrix> build(const MatrixXd& entries, std::string* why);

  MatrixXd m_;
  MatrixXd lower_;
  MatrixXd inverse_;
  double log_det_ = 0.0;
};

/// Multivariate IR-SV parameters: per-asset state recursions and a constant
/// correlation matrix for the observation noise.
struct IrMsvParams {
  VectorXd mu;
  VectorXd phi;
  VectorXd sigma;
  CorrelationMatrix R = CorrelationMatrix::identity(2);

  Index dim() const { return mu.size(); }
  IrSvParams asset(Index i) const { return {mu[i], phi[i], sigma[i]}; }
};

/// Requires p >= min_dim, matching sizes, 0 < phi_i < 1, sigma_i > 0.
void validate(const IrMsvParams& params, Index min_dim = 2);

struct IrMsvPath {
  MatrixXd h;        // p x T
  MatrixXd returns;  // p x T
};

/// Shared gap sequence for all assets; state draws for each asset precede the
/// correlated observation draw at each time.
IrMsvPath simulate_irmsv(const IrMsvParams& params, const Eigen::Ref<const VectorXd>& gaps,
                         Index length, Rng& rng);
IrMsvPath simulate_irmsv(const IrMsvParams& params, const ScaledGaps& gaps, Index length,
                         std::uint64_t seed);

/// log MVN(r | 0, H^{1/2} R H^{1/2}) with H = diag(exp(h)).
double joint_observation_log_density(const Eigen::Ref<const VectorXd>& r,
                                     const Eigen::Ref<const VectorXd>& h,
                                     const CorrelationMatrix& R);

/// Per-asset forecast summaries (outer index asset, inner index step).
std::vector<std::vector<HorizonSummary>> forecast_msv(const IrMsvParams& params,
                                                      const Eigen::Ref<const VectorXd>& last_h,
                                                      const Eigen::Ref<const VectorXd>& future_gaps,
                                                      Index n_draws, Rng& rng);

/// One forward path for all assets: h_out, r_out are p x steps.
void simulate_forward_msv(const IrMsvParams& params, const Eigen::Ref<const VectorXd>& last_h,
                          const Eigen::Ref<const VectorXd>& future_gaps, Rng& rng,
                          Eigen::Ref<MatrixXd> h_out, Eigen::Ref<MatrixXd> r_out);

}  // namespace irvol

#endif  // IRVOL_IRMSV_HPP

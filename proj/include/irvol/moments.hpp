#ifndef IRVOL_MOMENTS_HPP
#define IRVOL_MOMENTS_HPP

// Closed-form moments of squared returns under the IR-SV and IR-MSV models.
// All of them depend only on the stationary log-variance v = sigma^2 / (1 - phi^2).

#include <Eigen/Dense>

#include <cmath>

#include "irvol/error.hpp"
#include "irvol/irmsv.hpp"
#include "irvol/irsv.hpp"

namespace irvol {

namespace detail {

template <typename Scalar>
Scalar checked_stationary_variance(const IrSvParamsT<Scalar>& p) {
  if (!(p.phi * p.phi < Scalar(1))) throw ParameterError("|phi| must be < 1");
  return stationary_variance(p);
}

}  // namespace detail

/// E[r^2] = exp(mu + v / 2).
template <typename Scalar>
Scalar irsv_mean_sq(const IrSvParamsT<Scalar>& p) {
  using std::exp;
  return exp(p.mu + detail::checked_stationary_variance(p) / Scalar(2));
}

/// Var[r^2] = exp(2 mu + v) (3 exp(v) - 1).
template <typename Scalar>
Scalar irsv_var_sq(const IrSvParamsT<Scalar>& p) {
  using std::exp;
  const Scalar v = detail::checked_stationary_variance(p);
  return exp(Scalar(2) * p.mu + v) * (Scalar(3) * exp(v) - Scalar(1));
}

/// Kurtosis of r: 3 exp(v).
template <typename Scalar>
Scalar irsv_kurtosis(const IrSvParamsT<Scalar>& p) {
  using std::exp;
  return Scalar(3) * exp(detail::checked_stationary_variance(p));
}

/// Cov(r^2_t, r^2_{t+lag}) for a time lag > 0 (gap-time units):
/// exp(2 mu + v) [exp(v phi^lag) - 1]. At lag 0 use irsv_var_sq instead.
template <typename Scalar>
Scalar irsv_autocov_sq(const IrSvParamsT<Scalar>& p, Scalar lag) {
  using std::exp;
  using std::pow;
  if (!(lag > Scalar(0))) throw DomainError("lag must be positive");
  const Scalar v = detail::checked_stationary_variance(p);
  return exp(Scalar(2) * p.mu + v) * (exp(v * pow(p.phi, lag)) - Scalar(1));
}

/// m_i = E[r_i^2] per asset; independent of R.
inline VectorXd irmsv_mean_sq_vector(const IrMsvParams& p) {
  VectorXd m(p.dim());
  for (Index i = 0; i < p.dim(); ++i) m[i] = irsv_mean_sq(p.asset(i));
  return m;
}

/// Contemporaneous covariance of the squared-return vector. Diagonal is the
/// univariate Var[r^2]; off-diagonal is 2 rho_ik^2 m_i m_k.
inline MatrixXd irmsv_cov_sq_matrix(const IrMsvParams& p) {
  const Index n = p.dim();
  if (p.R.dim() != n) throw ParameterError("R dimension disagrees with parameters");
  const VectorXd m = irmsv_mean_sq_vector(p);
  MatrixXd cov(n, n);
  for (Index i = 0; i < n; ++i) {
    cov(i, i) = irsv_var_sq(p.asset(i));
    for (Index k = 0; k < i; ++k) {
      const double rho = p.R(i, k);
      cov(i, k) = cov(k, i) = 2.0 * rho * rho * m[i] * m[k];
    }
  }
  return cov;
}

}  // namespace irvol

#endif  // IRVOL_MOMENTS_HPP

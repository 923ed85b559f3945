#include "irvol/irmsv.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "irvol/error.hpp"

namespace irvol {

std::optional<CorrelationMatrix> CorrelationMatrix::build(const MatrixXd& entries,
                                                          std::string* why) {
  auto fail = [&](const char* msg) -> std::optional<CorrelationMatrix> {
    if (why) *why = msg;
    return std::nullopt;
  };
  if (entries.rows() != entries.cols() || entries.rows() < 1) return fail("matrix must be square");
  if (!entries.allFinite()) return fail("matrix has non-finite entries");
  const Index p = entries.rows();
  for (Index i = 0; i < p; ++i) {
    if (entries(i, i) != 1.0) return fail("diagonal must be exactly 1");
    for (Index k = 0; k < i; ++k) {
      if (std::abs(entries(i, k) - entries(k, i)) > 1e-12) return fail("matrix must be symmetric");
      if (!(std::abs(entries(i, k)) < 1.0)) return fail("correlations must lie in (-1, 1)");
    }
  }
  // Symmetrize exactly so downstream products stay symmetric.
  MatrixXd m = (entries + entries.transpose()) / 2.0;
  m.diagonal().setOnes();
  if (p > 1) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 1e-10)) return fail("matrix is not positive definite");
  }
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return fail("Cholesky factorization failed");

  CorrelationMatrix c;
  c.m_ = std::move(m);
  c.lower_ = llt.matrixL();
  c.inverse_ = llt.solve(MatrixXd::Identity(p, p));
  c.log_det_ = 2.0 * c.lower_.diagonal().array().log().sum();
  return c;
}

CorrelationMatrix::CorrelationMatrix(const MatrixXd& entries) {
  std::string why;
  auto c = build(entries, &why);
  if (!c) throw MatrixError("invalid correlation matrix: " + why);
  *this = std::move(*c);
}

std::optional<CorrelationMatrix> CorrelationMatrix::try_make(const MatrixXd& entries) {
  return build(entries, nullptr);
}

CorrelationMatrix CorrelationMatrix::identity(Index p) {
  return CorrelationMatrix(MatrixXd::Identity(p, p));
}

CorrelationMatrix CorrelationMatrix::from_lower(Index p, const Eigen::Ref<const VectorXd>& lower) {
  if (lower.size() != p * (p - 1) / 2) throw MatrixError("wrong number of correlations");
  MatrixXd m = MatrixXd::Identity(p, p);
  Index n = 0;
  for (Index i = 1; i < p; ++i) {
    for (Index k = 0; k < i; ++k, ++n) {
      m(i, k) = lower[n];
      m(k, i) = lower[n];
    }
  }
  return CorrelationMatrix(m);
}

VectorXd CorrelationMatrix::lower() const {
  const Index p = dim();
  VectorXd out(p * (p - 1) / 2);
  Index n = 0;
  for (Index i = 1; i < p; ++i) {
    for (Index k = 0; k < i; ++k) out[n++] = m_(i, k);
  }
  return out;
}

void validate(const IrMsvParams& params, Index min_dim) {
  const Index p = params.mu.size();
  if (p < min_dim) throw ParameterError("need at least " + std::to_string(min_dim) + " assets");
  if (params.phi.size() != p || params.sigma.size() != p || params.R.dim() != p) {
    throw ParameterError("parameter dimensions disagree");
  }
  for (Index i = 0; i < p; ++i) validate(params.asset(i));
}

IrMsvPath simulate_irmsv(const IrMsvParams& params, const Eigen::Ref<const VectorXd>& gaps,
                         Index length, Rng& rng) {
  validate(params);
  if (length < 1) throw DomainError("length must be at least 1");
  if (gaps.size() < length - 1) throw DomainError("not enough gaps for the requested length");

  const Index p = params.dim();
  const MatrixXd& L = params.R.lower_factor();
  IrMsvPath path{MatrixXd(p, length), MatrixXd(p, length)};
  VectorXd z(p);
  for (Index j = 0; j < length; ++j) {
    for (Index i = 0; i < p; ++i) {
      const double mu = params.mu[i];
      const double phi = params.phi[i];
      const double sigma = params.sigma[i];
      if (j == 0) {
        path.h(i, 0) = mu + sigma / std::sqrt(1.0 - phi * phi) * rng.normal();
      } else {
        const double g = gaps[j - 1];
        if (!(g > 0.0)) throw ZeroGapError("gaps must be positive");
        const double sd = sigma * std::sqrt(innovation_variance_ratio(phi, g));
        path.h(i, j) = mu + std::pow(phi, g) * (path.h(i, j - 1) - mu) + sd * rng.normal();
      }
    }
    for (Index i = 0; i < p; ++i) z[i] = rng.normal();
    const VectorXd eps = L * z;
    path.returns.col(j) = (path.h.col(j).array() / 2.0).exp() * eps.array();
  }
  return path;
}

IrMsvPath simulate_irmsv(const IrMsvParams& params, const ScaledGaps& gaps, Index length,
                         std::uint64_t seed) {
  Rng rng(seed);
  return simulate_irmsv(params, gaps.gaps, length, rng);
}

double joint_observation_log_density(const Eigen::Ref<const VectorXd>& r,
                                     const Eigen::Ref<const VectorXd>& h,
                                     const CorrelationMatrix& R) {
  const Index p = R.dim();
  if (r.size() != p || h.size() != p) throw DomainError("dimension mismatch");
  const VectorXd u = r.array() * (-h.array() / 2.0).exp();
  const VectorXd w = R.lower_factor().triangularView<Eigen::Lower>().solve(u);
  return -0.5 * (static_cast<double>(p) * std::log(2.0 * std::numbers::pi) + R.log_det() +
                 h.sum() + w.squaredNorm());
}

void simulate_forward_msv(const IrMsvParams& params, const Eigen::Ref<const VectorXd>& last_h,
                          const Eigen::Ref<const VectorXd>& future_gaps, Rng& rng,
                          Eigen::Ref<MatrixXd> h_out, Eigen::Ref<MatrixXd> r_out) {
  const Index p = params.dim();
  const MatrixXd& L = params.R.lower_factor();
  VectorXd h = last_h;
  VectorXd z(p);
  for (Index k = 0; k < future_gaps.size(); ++k) {
    const double g = future_gaps[k];
    for (Index i = 0; i < p; ++i) {
      const double phi = params.phi[i];
      const double sd = params.sigma[i] * std::sqrt(innovation_variance_ratio(phi, g));
      h[i] = params.mu[i] + std::pow(phi, g) * (h[i] - params.mu[i]) + sd * rng.normal();
    }
    for (Index i = 0; i < p; ++i) z[i] = rng.normal();
    h_out.col(k) = h;
    r_out.col(k) = (h.array() / 2.0).exp() * (L * z).array();
  }
}

std::vector<std::vector<HorizonSummary>> forecast_msv(const IrMsvParams& params,
                                                      const Eigen::Ref<const VectorXd>& last_h,
                                                      const Eigen::Ref<const VectorXd>& future_gaps,
                                                      Index n_draws, Rng& rng) {
  const Index p = params.dim();
  if (params.phi.size() != p || params.sigma.size() != p || params.R.dim() != p ||
      last_h.size() != p) {
    throw ParameterError("parameter dimensions disagree");
  }
  for (Index i = 0; i < p; ++i) validate_allow_degenerate(params.asset(i));
  if (future_gaps.size() == 0) throw DomainError("no forecast gaps given");
  if (n_draws < 1) throw DomainError("n_draws must be at least 1");
  if (!(future_gaps.array() > 0.0).all()) throw ZeroGapError("forecast gaps must be positive");

  const Index steps = future_gaps.size();
  std::vector<MatrixXd> h(static_cast<std::size_t>(p), MatrixXd(n_draws, steps));
  std::vector<MatrixXd> r(static_cast<std::size_t>(p), MatrixXd(n_draws, steps));
  MatrixXd h_path(p, steps);
  MatrixXd r_path(p, steps);
  for (Index d = 0; d < n_draws; ++d) {
    simulate_forward_msv(params, last_h, future_gaps, rng, h_path, r_path);
    for (Index i = 0; i < p; ++i) {
      h[static_cast<std::size_t>(i)].row(d) = h_path.row(i);
      r[static_cast<std::size_t>(i)].row(d) = r_path.row(i);
    }
  }
  std::vector<std::vector<HorizonSummary>> out;
  for (Index i = 0; i < p; ++i) {
    out.push_back(summarize_forecast_draws(h[static_cast<std::size_t>(i)],
                                           r[static_cast<std::size_t>(i)]));
  }
  return out;
}

}  // namespace irvol

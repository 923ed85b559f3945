#include <doctest.h>

#include <cmath>

#include "irvol/error.hpp"
#include "irvol/irmsv.hpp"
#include "irvol/moments.hpp"
#include "unit/test_support.hpp"

using namespace irvol;

// High-precision reference values (30-digit arithmetic, rounded).
TEST_CASE("IR-SV closed forms") {
  const IrSvParams p{-9, 0.2, 0.8};
  CHECK(std::abs(irsv_mean_sq(p) - 1.7230e-4) < 1e-7);
  CHECK(irsv_mean_sq(p) == doctest::Approx(1.72232255960810e-4).epsilon(1e-12));
  CHECK(irsv_var_sq(p) == doctest::Approx(1.43668505589224e-7).epsilon(1e-12));
  CHECK(irsv_kurtosis(p) == doctest::Approx(5.84320212316403).epsilon(1e-12));
  CHECK(std::abs(irsv_kurtosis(p) - 5.8432) < 1e-3);
  CHECK(irsv_autocov_sq(p, 1.0) == doctest::Approx(4.23099326861923e-9).epsilon(1e-12));
}

TEST_CASE("degenerate limits") {
  const IrSvParams p{0.0, 0.5, 1e-12};
  CHECK(irsv_mean_sq(p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(irsv_var_sq(p) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(irsv_kurtosis(p) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("shift and ordering properties") {
  const IrSvParams p{-9, 0.6, 0.8};
  const IrSvParams q{-9 + std::log(2.0), 0.6, 0.8};
  CHECK(irsv_mean_sq(q) / irsv_mean_sq(p) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(irsv_var_sq(p) > 2 * irsv_mean_sq(p) * irsv_mean_sq(p));
  CHECK(irsv_kurtosis(p) > 3.0);
  CHECK(irsv_autocov_sq(p, 2.0) < irsv_autocov_sq(p, 1.0));
  CHECK(irsv_autocov_sq(p, 500.0) < 1e-100 + 1e-20 * irsv_var_sq(p));
  for (double phi : {0.2, 0.6, 0.9}) {
    const IrSvParams r{-9, phi, 0.8};
    const double lhs = irsv_var_sq(r);
    const double rhs = irsv_mean_sq(r) * irsv_mean_sq(r) * (irsv_kurtosis(r) - 1.0);
    CHECK(std::abs(lhs / rhs - 1.0) < 1e-12);
  }
}

TEST_CASE("moment errors") {
  CHECK_THROWS_AS(irsv_mean_sq(IrSvParams{0, 1.0, 1}), ParameterError);
  CHECK_THROWS_AS(irsv_kurtosis(IrSvParams{0, -1.1, 1}), ParameterError);
  CHECK_THROWS_AS(irsv_autocov_sq(IrSvParams{0, 0.5, 1}, 0.0), DomainError);
  CHECK_THROWS_AS(irsv_autocov_sq(IrSvParams{0, 0.5, 1}, -1.0), DomainError);
}

TEST_CASE("IR-MSV closed forms") {
  IrMsvParams p;
  p.mu = Eigen::Vector2d(-9, -9);
  p.phi = Eigen::Vector2d(0.2, 0.2);
  p.sigma = Eigen::Vector2d(0.8, 0.8);
  p.R = CorrelationMatrix::from_lower(2, VectorXd::Constant(1, 0.6));
  const MatrixXd cov = irmsv_cov_sq_matrix(p);
  CHECK(cov(0, 1) == doctest::Approx(2.13580439952120e-8).epsilon(1e-12));
  CHECK(cov(1, 0) == cov(0, 1));
  CHECK(cov(0, 0) == irsv_var_sq(p.asset(0)));
  p.R = CorrelationMatrix::from_lower(2, VectorXd::Constant(1, -0.6));
  CHECK(irmsv_cov_sq_matrix(p)(0, 1) == cov(0, 1));
  p.R = CorrelationMatrix::identity(2);
  CHECK(irmsv_cov_sq_matrix(p)(0, 1) == 0.0);

  IrMsvParams one;
  one.mu = VectorXd::Constant(1, -9);
  one.phi = VectorXd::Constant(1, 0.6);
  one.sigma = VectorXd::Constant(1, 0.8);
  one.R = CorrelationMatrix::identity(1);
  CHECK(irmsv_mean_sq_vector(one)[0] == irsv_mean_sq(IrSvParams{-9, 0.6, 0.8}));
}

TEST_CASE("IR-MSV mean vector matches simulation") {
  IrMsvParams p;
  p.mu = Eigen::Vector3d(-9, -9.5, -8.5);
  p.phi = Eigen::Vector3d(0.7, 0.5, 0.3);
  p.sigma = Eigen::Vector3d(1.0, std::sqrt(0.8), std::sqrt(0.5));
  p.R = CorrelationMatrix::from_lower(3, Eigen::Vector3d(0.6, 0.4, 0.2));
  const VectorXd m = irmsv_mean_sq_vector(p);
  p.R = CorrelationMatrix::identity(3);
  CHECK(irmsv_mean_sq_vector(p) == m);
  p.R = CorrelationMatrix::from_lower(3, Eigen::Vector3d(0.6, 0.4, 0.2));

  const Index T = 200000;
  Rng rng(21);
  const auto path = simulate_irmsv(p, VectorXd::Constant(T - 1, 0.5), T, rng);
  for (Index i = 0; i < 3; ++i) {
    const VectorXd r2 = path.returns.row(i).array().square();
    CHECK(std::abs(r2.mean() - m[i]) < 3 * testing::batch_se(r2));
  }
}

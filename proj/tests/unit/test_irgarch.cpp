#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "irvol/error.hpp"
#include "irvol/irgarch.hpp"
#include "irvol/optimize.hpp"
#include "unit/test_support.hpp"

using namespace irvol;

namespace {

VectorXd poisson_gaps(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return generate_poisson_gaps(n, 3.0, rng);
}

}  // namespace

TEST_CASE("Nelder-Mead on a quadratic bowl and Rosenbrock") {
  const auto bowl = nelder_mead([](const Eigen::VectorXd& x) { return (x - Eigen::Vector2d(1, -2)).squaredNorm(); },
                                Eigen::Vector2d(5, 5));
  CHECK(bowl.converged);
  CHECK((bowl.x - Eigen::Vector2d(1, -2)).norm() < 1e-6);
  const auto rosen = nelder_mead(
      [](const Eigen::VectorXd& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); },
      Eigen::Vector2d(-1.2, 1.0));
  CHECK((rosen.x - Eigen::Vector2d(1, 1)).norm() < 1e-5);
  // Infeasible region returns +inf.
  const auto con = nelder_mead(
      [](const Eigen::VectorXd& x) {
        return x[0] < 0.5 ? std::numeric_limits<double>::infinity() : (x[0] - 0.2) * (x[0] - 0.2);
      },
      VectorXd::Constant(1, 2.0));
  CHECK(con.x[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("constraint handling") {
  const VectorXd g = Eigen::Vector3d(1, 2, 3);
  CHECK(constraint_gap(g) == 1.0);
  CHECK(constraint_gap(Eigen::Vector2d(0.5, 2.0)) == 0.5);
  CHECK_NOTHROW(validate(IrGarchParams{0.01, 0.7, 0.25}, g));
  CHECK_THROWS_AS(validate(IrGarchParams{0.01, 0.7, 0.35}, g), ParameterError);
  CHECK_THROWS_AS(validate(IrGarchParams{0.0, 0.7, 0.2}, g), ParameterError);
  CHECK_THROWS_AS(validate(IrGarchParams{0.01, 0.0, 0.2}, g), ParameterError);
  CHECK_THROWS_AS(validate(IrGarchParams{0.01, 0.2, -0.1}, g), ParameterError);
  CHECK_THROWS_AS(simulate_irgarch(IrGarchParams{0.01, 0.7, 0.35}, g, 4, 1), ParameterError);
}

TEST_CASE("no persistence limit gives iid N(0, omega)") {
  const Index T = 50000;
  const VectorXd g = poisson_gaps(T - 1, 2);
  const IrGarchParams p{0.02, 1e-12, 1e-12};
  const auto path = simulate_irgarch(p, g, T, 3);
  CHECK((path.sigma2.tail(T - 1).array() - 0.02).abs().maxCoeff() < 1e-12);
  const auto fit = fit_ml(path.returns.head(5000), g.head(4999));
  CHECK(std::abs(fit.params.omega / testing::variance(path.returns.head(5000)) - 1.0) < 0.1);
}

TEST_CASE("simulation properties") {
  const Index T = 200000;
  const VectorXd g = poisson_gaps(T - 1, 4);
  const IrGarchParams p{0.01, 0.7, 0.25};
  const auto path = simulate_irgarch(p, g, T, 5);
  CHECK((path.sigma2.array() > 0.0).all());
  const VectorXd r2 = path.returns.array().square();
  CHECK(std::abs(r2.mean() - 0.01) < 3 * testing::batch_se(r2));
  CHECK(std::abs(path.returns.mean()) < 3 * testing::batch_se(path.returns));
  // Filtering the simulated returns reproduces sigma2 exactly.
  CHECK(filter_sigma2(p, path.returns, g) == path.sigma2);
}

TEST_CASE("IR-ARCH specialization") {
  const Index T = 200000;
  const VectorXd g = poisson_gaps(T - 1, 6);
  const auto arch = simulate_irarch(0.01, 0.5, g, T, 7);
  const auto garch = simulate_irgarch(IrGarchParams{0.01, 0.5, 0.0}, g, T, 7);
  CHECK(arch.returns == garch.returns);
  CHECK(arch.sigma2 == garch.sigma2);
  const VectorXd r2 = arch.returns.array().square();
  CHECK(std::abs(r2.mean() - 0.01) < 3 * testing::batch_se(r2));
  // x_j = r_j^2 - omega follows x_j = alpha^{g_j} x_{j-1} + eta_j with mean-zero eta.
  VectorXd eta(T - 1);
  for (Index j = 1; j < T; ++j) eta[j - 1] = (r2[j] - 0.01) - std::pow(0.5, g[j - 1]) * (r2[j - 1] - 0.01);
  CHECK(std::abs(eta.mean()) < 3 * testing::batch_se(eta));
}

TEST_CASE("filter recursion") {
  const IrGarchParams p{0.05, 0.3, 0.6};
  SUBCASE("zero returns converge to the fixed point") {
    const Index T = 400;
    const VectorXd g = VectorXd::Constant(T - 1, 2.0);
    const VectorXd s2 = filter_sigma2(p, VectorXd::Zero(T), g);
    const double a = std::pow(0.3, 2.0), b = std::pow(0.6, 2.0);
    CHECK(s2[T - 1] == doctest::Approx(0.05 * (1 - a - b) / (1 - b)).epsilon(1e-12));
  }
  SUBCASE("a single large return raises the next variance by alpha^g r^2") {
    const VectorXd g = Eigen::Vector3d(1, 3, 2);
    const VectorXd r0 = VectorXd::Constant(4, 0.1);
    VectorXd r1 = r0;
    r1[1] = 2.0;
    const VectorXd d = filter_sigma2(p, r1, g) - filter_sigma2(p, r0, g);
    CHECK(d[2] == doctest::Approx(std::pow(0.3, 3.0) * (4.0 - 0.01)).epsilon(1e-12));
    CHECK(d[1] == 0.0);
  }
}

TEST_CASE("conditional log-likelihood") {
  // sigma2_1 = 2 (1 - 0.5) = 1 and, with r_1 = 0, sigma2_2 = 1: one standard-normal term.
  const IrGarchParams p{2.0, 0.5, 0.0};
  const double ll = conditional_loglik(p, Eigen::Vector2d(0.0, 0.0), VectorXd::Ones(1));
  CHECK(ll == doctest::Approx(-0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-12));

  CHECK(conditional_loglik(IrGarchParams{0.01, 0.8, 0.3}, Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector2d(1, 1)) ==
        -std::numeric_limits<double>::infinity());

  // Adding a leading observation: the sum still starts at the second term.
  const VectorXd r = (VectorXd(4) << 0.3, 0.1, -0.2, 0.05).finished();
  const VectorXd g = Eigen::Vector3d(1, 2, 1);
  const IrGarchParams q{0.04, 0.3, 0.5};
  const VectorXd s2 = filter_sigma2(q, r, g);
  double manual = 0.0;
  for (Index j = 1; j < 4; ++j) manual -= 0.5 * (std::log(2 * std::numbers::pi) + std::log(s2[j]) + r[j] * r[j] / s2[j]);
  CHECK(conditional_loglik(q, r, g) == doctest::Approx(manual).epsilon(1e-14));

  // Continuity / finiteness over random feasible parameters.
  Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    IrGarchParams f{std::exp(rng.normal() - 4), 0.01 + 0.98 * rng.uniform(), 0.0};
    f.beta1 = (1.0 - f.alpha1) * 0.999 * rng.uniform();
    CHECK(std::isfinite(conditional_loglik(f, r, g)));
  }
}

TEST_CASE("likelihood prefers the truth") {
  const IrGarchParams p{0.01, 0.3, 0.4};
  int wins = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const VectorXd g = poisson_gaps(4999, 100 + rep);
    const auto path = simulate_irgarch(p, g, 5000, 200 + rep);
    if (conditional_loglik(p, path.returns, g) > conditional_loglik({0.01, 0.5, 0.4}, path.returns, g)) ++wins;
  }
  CHECK(wins >= 19);
}

TEST_CASE("fit_ml recovers parameters and reports convergence") {
  const IrGarchParams p{0.01, 0.7, 0.25};
  const VectorXd g = poisson_gaps(4999, 41);
  const auto path = simulate_irgarch(p, g, 5000, 42);
  MlOptions opt;
  opt.seed = 3;
  const auto fit = fit_ml(path.returns, g, opt);
  CHECK(fit.starts.size() == 5);
  CHECK(fit.converged);
  CHECK(std::abs(fit.params.alpha1 - 0.7) < 0.1);
  CHECK(std::abs(fit.params.beta1 - 0.25) < 0.12);
  CHECK(std::abs(fit.params.omega - 0.01) < 0.005);
  CHECK(fit.std_errors.allFinite());
  CHECK(fit.loglik >= conditional_loglik(p, path.returns, g));

  opt.threads = 3;
  const auto threaded = fit_ml(path.returns, g, opt);
  CHECK(threaded.params.omega == fit.params.omega);
  CHECK(threaded.params.alpha1 == fit.params.alpha1);

  opt.arch_only = true;
  opt.threads = 1;
  const auto arch = fit_ml(path.returns, g, opt);
  CHECK(arch.params.beta1 == 0.0);
  CHECK(arch.loglik <= fit.loglik + 1e-6);

  CHECK_THROWS_AS(fit_ml(path.returns.head(20), g.head(19)), DomainError);
}

#include <doctest.h>

#include <cmath>

#include "irvol/core.hpp"
#include "irvol/error.hpp"

using namespace irvol;

TEST_CASE("compute_gaps differences timestamps") {
  CHECK(compute_gaps(Eigen::Vector4d(1, 2, 4, 7)) == Eigen::Vector3d(1, 2, 3));
  const VectorXd one = compute_gaps(Eigen::Vector2d(0.0, 0.5));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 0.5);
}

TEST_CASE("compute_gaps rejects bad timestamps") {
  CHECK_THROWS_AS(compute_gaps(Eigen::Vector3d(1, 1, 2)), ZeroGapError);
  CHECK_THROWS_AS(compute_gaps(Eigen::Vector3d(1, 3, 2)), OrderingError);
  CHECK_THROWS_AS(compute_gaps(VectorXd::Constant(1, 1.0)), DomainError);
}

TEST_CASE("scale_gaps divides by the maximum") {
  const auto s = scale_gaps(Eigen::Vector3d(1, 2, 4));
  CHECK(s.gaps == Eigen::Vector3d(0.25, 0.5, 1.0));
  CHECK(s.scale_factor == 4.0);
  const auto c = scale_gaps(Eigen::Vector3d(3, 3, 3));
  CHECK(c.gaps == Eigen::Vector3d(1, 1, 1));
  CHECK(c.scale_factor == 3.0);
  const auto single = scale_gaps(VectorXd::Constant(1, 0.5));
  CHECK(single.gaps[0] == 1.0);
  CHECK(single.scale_factor == 0.5);
  CHECK_THROWS_AS(scale_gaps(VectorXd()), DomainError);
}

TEST_CASE("scale_gaps is idempotent") {
  const auto once = scale_gaps(Eigen::Vector4d(0.3, 1.7, 2.2, 0.9));
  const auto twice = scale_gaps(once.gaps);
  CHECK(twice.gaps == once.gaps);
  CHECK(twice.scale_factor == 1.0);
}

TEST_CASE("log_returns") {
  CHECK(log_returns(Eigen::Vector2d(100, 100))[0] == 0.0);
  CHECK(log_returns(Eigen::Vector2d(100, 100 * std::exp(1.0)))[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(log_returns(Eigen::Vector2d(2.0, 1.0))[0] == doctest::Approx(-0.693147180559945).epsilon(1e-12));
  CHECK_THROWS_AS(log_returns(Eigen::Vector2d(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(log_returns(Eigen::Vector2d(-1.0, 1.0)), DomainError);
}

TEST_CASE("log_returns inverts exp(cumsum)") {
  Rng rng(3);
  VectorXd x(50);
  for (Index k = 0; k < x.size(); ++k) x[k] = 2.0 * rng.uniform() - 1.0;
  VectorXd prices(51);
  prices[0] = 1.0;
  double acc = 0.0;
  for (Index k = 0; k < x.size(); ++k) {
    acc += x[k];
    prices[k + 1] = std::exp(acc);
  }
  CHECK((log_returns(prices) - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gaps and timestamps round-trip") {
  const VectorXd t = (VectorXd(5) << 10.0, 10.25, 11.0, 13.5, 14.0).finished();
  const VectorXd back = timestamps_from_gaps(compute_gaps(t), t[0]);
  CHECK((back - t).cwiseAbs().maxCoeff() < kTimeTolerance);
}

TEST_CASE("generate_gaps contract") {
  const auto a = generate_gaps(5, 3.0, 42);
  const auto b = generate_gaps(5, 3.0, 42);
  CHECK(a.gaps == b.gaps);
  CHECK((a.gaps.array() > 0.0).all());
  CHECK((a.gaps.array() <= 1.0).all());
  const auto big = generate_gaps(10000, 3.0, 7);
  CHECK(big.gaps.maxCoeff() == 1.0);
  CHECK((big.gaps.array() > 0.0).all());
}

TEST_CASE("zero-truncated Poisson gap mean") {
  // Brute-force sum of the truncated pmf.
  double num = 0.0, mass = 0.0, pk = std::exp(-3.0);
  for (int k = 1; k < 200; ++k) {
    pk *= 3.0 / k;
    num += k * pk;
    mass += pk;
  }
  const double truth = num / mass;
  CHECK(truth == doctest::Approx(3.15718708947377).epsilon(1e-12));
  Rng rng(11);
  const VectorXd g = generate_poisson_gaps(200000, 3.0, rng);
  CHECK((g.array() >= 1.0).all());
  CHECK(std::abs(g.mean() / truth - 1.0) < 0.02);
}

TEST_CASE("TickSeries and GapSeries validation") {
  TickSeries t{"A", Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 1, 1)};
  CHECK_NOTHROW(t.validate());
  t.prices[1] = 0.0;
  CHECK_THROWS_AS(t.validate(), DomainError);
  t.prices[1] = 1.0;
  t.timestamps[2] = 2.0;
  CHECK_THROWS(t.validate());

  const auto gs = GapSeries::from_timestamps(Eigen::Vector3d(0, 1, 3), Eigen::Vector3d(0.1, 0.2, 0.3));
  CHECK(gs.gaps == Eigen::Vector2d(1, 2));
  GapSeries bad = gs;
  bad.gaps[1] = 2.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

#include <doctest.h>

#include <algorithm>

#include "irvol/error.hpp"
#include "irvol/refresh.hpp"

using namespace irvol;

namespace {

TickSeries ticks(const std::string& id, std::initializer_list<double> t, std::initializer_list<double> p) {
  TickSeries s;
  s.asset_id = id;
  s.timestamps = Eigen::Map<const VectorXd>(std::data(t), static_cast<Index>(t.size()));
  s.prices = Eigen::Map<const VectorXd>(std::data(p), static_cast<Index>(p.size()));
  return s;
}

}  // namespace

TEST_CASE("one-second aggregation") {
  const double t0 = 32400.0;  // 09:00:00
  const auto one = aggregate_one_second(ticks("A", {t0 + 0.2, t0 + 0.9}, {10, 11}));
  REQUIRE(one.size() == 1);
  CHECK(one.timestamps[0] == t0 + 1);
  CHECK(one.prices[0] == 11);

  const auto per_second = aggregate_one_second(ticks("A", {1.5, 2.5, 3.5}, {1, 2, 3}));
  CHECK(per_second.timestamps == Eigen::Vector3d(2, 3, 4));
  CHECK(per_second.prices == Eigen::Vector3d(1, 2, 3));

  // Three populated seconds out of ten, no fill-forward; whole seconds stay put.
  const auto sparse = aggregate_one_second(ticks("A", {0.1, 0.5, 4.0, 9.2, 9.7}, {1, 2, 3, 4, 5}));
  CHECK(sparse.timestamps == Eigen::Vector3d(1, 4, 10));
  CHECK(sparse.prices == Eigen::Vector3d(2, 3, 5));
}

TEST_CASE("refresh times") {
  CHECK(refresh_times({Eigen::Vector3d(1, 3, 5), Eigen::Vector3d(2, 3, 6)}) == Eigen::Vector3d(2, 3, 6));
  const VectorXd grid = Eigen::Vector4d(1, 2, 3.5, 7);
  CHECK(refresh_times({grid, grid, grid}) == grid);
  CHECK_THROWS_AS(refresh_times({grid}), DomainError);
  CHECK_THROWS_AS(refresh_times({grid, VectorXd()}), DomainError);
}

TEST_CASE("refresh_sample uses previous-tick prices") {
  const auto res = refresh_sample({ticks("A", {1, 3, 5}, {10, 11, 12}), ticks("B", {2, 3, 6}, {20, 21, 22})});
  CHECK(res.refresh_times == Eigen::Vector3d(2, 3, 6));
  CHECK(res.prices.row(0).transpose() == Eigen::Vector3d(10, 11, 12));
  CHECK(res.prices.row(1).transpose() == Eigen::Vector3d(20, 21, 22));
  CHECK(res.counts == std::vector<Index>{3, 3});
  CHECK(res.asset_ids == std::vector<std::string>{"A", "B"});

  const auto same = ticks("X", {1, 2, 4}, {5, 6, 7});
  const auto id = refresh_sample({same, same});
  CHECK(id.prices.row(0) == same.prices.transpose());
  CHECK(id.refresh_times == same.timestamps);

  const auto single = refresh_sample({ticks("A", {4}, {1}), ticks("B", {1, 2, 5}, {1, 2, 3})});
  CHECK(single.size() == 1);
  CHECK(single.refresh_times[0] == 4);
  CHECK(single.prices(1, 0) == 2);
}

TEST_CASE("refresh invariants on random instances") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + static_cast<int>(rng.uniform() * 3);
    std::vector<VectorXd> times;
    std::vector<double> all;
    Index min_n = 1000;
    for (int i = 0; i < p; ++i) {
      const Index n = 1 + static_cast<Index>(rng.uniform() * 20);
      VectorXd t(n);
      double c = 0;
      for (Index k = 0; k < n; ++k) t[k] = c += 1 + std::floor(rng.uniform() * 3);
      times.push_back(t);
      all.insert(all.end(), t.data(), t.data() + n);
      min_n = std::min(min_n, n);
    }
    const VectorXd tau = refresh_times(times);
    CHECK(tau.size() <= min_n);
    for (Index j = 0; j < tau.size(); ++j) {
      CHECK(std::find(all.begin(), all.end(), tau[j]) != all.end());
      if (j > 0) CHECK(tau[j] > tau[j - 1]);
    }
    std::vector<VectorXd> rev(times.rbegin(), times.rend());
    CHECK(refresh_times(rev) == tau);
    // Synchronized series refreshed again are unchanged.
    CHECK(refresh_times(std::vector<VectorXd>(static_cast<std::size_t>(p), tau)) == tau);
  }
}

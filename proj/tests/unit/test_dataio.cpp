#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "irvol/dataio.hpp"
#include "irvol/forecast.hpp"
#include "irvol/error.hpp"
#include "unit/test_support.hpp"

using namespace irvol;
using testing::spit;
using testing::slurp;
using testing::TempDir;

TEST_CASE("number formatting round-trips") {
  Rng rng(1);
  for (int k = 0; k < 2000; ++k) {
    const double x = rng.normal() * std::pow(10.0, 40 * rng.uniform() - 20);
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::isnan(parse_double("nan")));
  CHECK_THROWS_AS(parse_double("1.5x", 7), FormatError);
  try {
    parse_double("abc", 12);
  } catch (const FormatError& e) {
    CHECK(e.line() == 12);
  }
}

TEST_CASE("timestamps") {
  CHECK(parse_timestamp("1700000000.25") == 1700000000.25);
  CHECK(parse_timestamp("1970-01-01T00:00:01Z") == 1.0);
  CHECK(parse_timestamp("2020-01-02 09:45:01.50") == doctest::Approx(1577958301.5).epsilon(1e-15));
  CHECK_THROWS_AS(parse_timestamp("2020-13-02T00:00:00"), FormatError);
  CHECK_THROWS_AS(parse_timestamp("yesterday"), FormatError);
}

TEST_CASE("read_ticks") {
  TempDir dir;
  SUBCASE("grouping, sorting, duplicates") {
    std::string text = "asset,timestamp,price\n";
    for (int k = 9; k >= 0; --k) {
      for (const char* a : {"AAA", "BBB", "CCC"}) text += std::string(a) + "," + std::to_string(k) + ",1" + std::to_string(k) + "\n";
    }
    text += "AAA,3,99\n";
    spit(dir.file("t.csv"), text);
    const auto s = read_ticks(dir.file("t.csv"));
    REQUIRE(s.size() == 3);
    CHECK(s[0].asset_id == "AAA");
    CHECK(s[2].asset_id == "CCC");
    CHECK(s[1].size() == 10);
    CHECK(s[0].size() == 10);
    CHECK(std::is_sorted(s[0].timestamps.data(), s[0].timestamps.data() + 10));
    CHECK(s[0].prices[3] == 99);
    CHECK(s[1].prices[3] == 13);
  }
  SUBCASE("bad rows carry line numbers") {
    spit(dir.file("bad.csv"), "asset,timestamp,price\nA,1,10\nA,2,-1\n");
    try {
      read_ticks(dir.file("bad.csv"));
      FAIL("expected an error");
    } catch (const FormatError& e) {
      CHECK(e.line() == 3);
    }
    spit(dir.file("empty.csv"), "");
    CHECK_THROWS_AS(read_ticks(dir.file("empty.csv")), FormatError);
    spit(dir.file("header.csv"), "asset,timestamp,price\n");
    CHECK_THROWS_AS(read_ticks(dir.file("header.csv")), FormatError);
    CHECK_THROWS_AS(read_ticks(dir.file("missing.csv")), IoError);
  }
  SUBCASE("write then read") {
    TickSeries a{"A", Eigen::Vector3d(1.5, 2.25, 7), Eigen::Vector3d(10, 10.5, 9.75)};
    write_ticks({a}, dir.file("w.csv"));
    const auto back = read_ticks(dir.file("w.csv"));
    CHECK(back[0].timestamps == a.timestamps);
    CHECK(back[0].prices == a.prices);
  }
}

TEST_CASE("series files") {
  TempDir dir;
  SeriesTable t;
  t.names = {"x", "y"};
  t.time = Eigen::Vector4d(0, 1.5, 2.0, 5.0);
  t.gap = Eigen::Vector4d(std::numeric_limits<double>::quiet_NaN(), 1.5, 0.5, 3.0);
  t.values = MatrixXd::Random(2, 4);
  write_series(t, dir.file("s.csv"));
  const auto back = read_series(dir.file("s.csv"));
  CHECK(back.names == t.names);
  CHECK(back.time == t.time);
  CHECK(back.values == t.values);
  CHECK(std::isnan(back.gap[0]));
  CHECK(back.inner_gaps() == t.inner_gaps());
  const auto tail = back.slice(2, 2);
  CHECK(tail.gap[0] == 0.5);
  CHECK(tail.values.col(1) == t.values.col(3));
  CHECK(back.series(1).values == t.values.row(1).transpose());

  spit(dir.file("bad.csv"), "time,gap,x\n0,nan,1\n1,2,1\n");
  CHECK_THROWS_AS(read_series(dir.file("bad.csv")), FormatError);
}

TEST_CASE("chain round-trip") {
  TempDir dir;
  McmcChain c;
  c.model = "irsv";
  c.param_names = {"mu", "phi", "sigma"};
  c.latent_names = {"h[1]", "h[5]"};
  c.draws = MatrixXd::Random(100, 3) * 1e-3;
  c.latent_draws = MatrixXd::Random(100, 2) * 10;
  c.acceptance = {{"h", 0.41}, {"mu", 0.5}};
  McmcConfig cfg;
  cfg.seed = 77;
  c.config = cfg;
  c.metadata["gap_scale"] = 11;
  c.series_names = {"r"};
  const std::string path = dir.file("chain.csv");
  write_chain(c, path);
  const auto back = read_chain(path);
  CHECK(back.draws == c.draws);
  CHECK(back.latent_draws == c.latent_draws);
  CHECK(back.param_names == c.param_names);
  CHECK(back.latent_names == c.latent_names);
  CHECK(back.acceptance == c.acceptance);
  REQUIRE(back.config.has_value());
  CHECK(back.config->seed == 77);
  CHECK(back.metadata.at("gap_scale") == 11);
  CHECK(back.series_names == c.series_names);
  CHECK(back.warnings.empty());

  SUBCASE("missing sidecar") {
    std::filesystem::remove(chain_sidecar_path(path));
    const auto bare = read_chain(path);
    CHECK(bare.draws == c.draws);
    CHECK(bare.latent_draws == c.latent_draws);
    CHECK_FALSE(bare.config.has_value());
    CHECK_FALSE(bare.warnings.empty());
    CHECK(bare.model == "irsv");
  }
  SUBCASE("schema mismatch") {
    auto meta = read_json(chain_sidecar_path(path));
    meta["format"] = "irvol-chain-v0";
    write_json(meta, chain_sidecar_path(path));
    CHECK_THROWS_AS(read_chain(path), VersionError);
  }
  SUBCASE("width mismatch") {
    std::string text = slurp(path);
    text += "1,2\n";
    spit(path, text);
    CHECK_THROWS_AS(read_chain(path), FormatError);
  }
}

TEST_CASE("summary table") {
  TempDir dir;
  PosteriorSummary s;
  ParameterSummary mu{"mu", -8.9997, 0.06, -9.1117, -8.8627, 812.34, -9.0};
  s.parameters.push_back(mu);
  write_summary(s, dir.file("s.csv"));
  CHECK(slurp(dir.file("s.csv")) ==
        "parameter,true_value,mean,sd,q2.5,q97.5,ess\nmu,-9.0000,-8.9997,0.0600,-9.1117,-8.8627,812.3\n");

  write_summary(PosteriorSummary{}, dir.file("e.csv"));
  CHECK(slurp(dir.file("e.csv")) == "parameter,mean,sd,q2.5,q97.5,ess\n");

  s.parameters[0].name = "\xcf\x86";
  CHECK_THROWS_AS(write_summary(s, dir.file("x.csv")), FormatError);
}

TEST_CASE("parameter JSON") {
  const auto sv = nlohmann::json::parse(R"({"mu": -9, "phi": 0.2, "sigma_eta": 0.8})").get<IrSvParams>();
  CHECK(sv.phi == 0.2);
  const auto msv = nlohmann::json::parse(R"({"mu":[-9,-9.5,-8.5],"phi":[0.7,0.5,0.3],"sigma":[1,0.9,0.7],"rho":[0.6,0.4,0.2]})")
                       .get<IrMsvParams>();
  CHECK(msv.R(2, 1) == 0.2);
  const nlohmann::json again = msv;
  CHECK(again.get<IrMsvParams>().R.matrix() == msv.R.matrix());
  const auto pr = nlohmann::json::parse(R"({"lkj_eta": 2.0})").get<IrMsvPriors>();
  CHECK(pr.lkj_eta == 2.0);
  CHECK(pr.phi_normal.variance == 0.5);
}

TEST_CASE("forecast table round-trip") {
  TempDir dir;
  Rng rng(5);
  std::vector<ForecastRow> rows;
  for (Index h : {1, 5, 44}) {
    ForecastRow r{"irsv", "r", h, {}};
    r.summary.step = h;
    r.summary.h_mean = rng.normal();
    r.summary.h_lo = r.summary.h_mean - 1;
    r.summary.h_hi = r.summary.h_mean + 1;
    r.summary.var_mean = std::exp(rng.normal());
    r.summary.var_lo = r.summary.var_mean / 3;
    r.summary.var_hi = r.summary.var_mean * 3;
    r.summary.vol_mean = std::sqrt(r.summary.var_mean);
    r.summary.r2_mean = rng.uniform();
    r.summary.abs_r_mean = rng.uniform() / 7;
    rows.push_back(r);
  }
  write_forecast(rows, dir.file("f.csv"));
  const auto back = read_forecast(dir.file("f.csv"));
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(back[k].horizon == rows[k].horizon);
    CHECK(back[k].asset == "r");
    CHECK(back[k].summary.h_lo == rows[k].summary.h_lo);
    CHECK(back[k].summary.var_hi == rows[k].summary.var_hi);
    CHECK(back[k].summary.abs_r_mean == rows[k].summary.abs_r_mean);
  }
}

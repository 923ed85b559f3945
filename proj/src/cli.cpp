#include "irvol/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "irvol/core.hpp"
#include "irvol/dataio.hpp"
#include "irvol/error.hpp"
#include "irvol/forecast.hpp"
#include "irvol/irgarch.hpp"
#include "irvol/irmsv.hpp"
#include "irvol/irsv.hpp"
#include "irvol/mcmc.hpp"
#include "irvol/refresh.hpp"

namespace irvol {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = ".";
};

struct SimulateArgs {
  std::string model;
  std::string params;
  Index length = 2000;
  Index replicates = 1;
  double gap_mean = 3.0;
};

struct FitArgs {
  std::string model;
  std::string data;
  std::string series;
  std::string priors;
  std::string truth;
  Index iters = 20000;
  Index burnin = 5000;
  Index thin = 10;
  Index chains = 1;
  Index holdout = 44;
  Index latent_stride = 10;
  bool all_latent = false;
  int starts = 5;
  Index progress = 0;
};

struct RefreshArgs {
  std::string ticks;
  bool aggregate = true;
};

struct ForecastArgs {
  std::string chain;
  std::string data;
  std::string horizons = "1,5,10,22,44";
  Index paths = 10;
  Index max_draws = 0;
  double gap = 0.0;
};

struct CompareArgs {
  std::vector<std::string> forecasts;
  std::string holdout;
};

/// Records inputs/outputs of one run and writes the manifest.
struct Manifest {
  std::string subcommand;
  std::vector<std::string> argv;
  json config = json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

template <class Work>
void parallel_for(Index n, int threads, Work&& work) {
  const Index t = std::clamp<Index>(threads, 1, std::max<Index>(n, 1));
  if (t == 1) {
    for (Index k = 0; k < n; ++k) work(k);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
  for (Index w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Index k = w; k < n; k += t) work(k);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string out_path(const Common& c, const std::string& name) { return (fs::path(c.out) / name).string(); }

void ensure_out_dir(const Common& c) {
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec || !fs::is_directory(c.out)) throw IoError("cannot create output directory '" + c.out + "'");
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("missing ") + what);
  if (!fs::exists(path)) throw IoError(std::string(what) + " '" + path + "' does not exist");
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const Manifest& m, const Common& c, const std::string& started, double elapsed) {
  json j;
  j["irvol_version"] = IRVOL_VERSION;
  j["subcommand"] = m.subcommand;
  j["argv"] = m.argv;
  j["config"] = m.config;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["timing"] = {{"started_utc", started}, {"elapsed_seconds", elapsed}};
  write_json(j, out_path(c, "manifest.json"));
}

std::vector<Index> parse_horizons(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const double v = parse_double(item);
    if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("horizons must be positive integers");
    out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) throw ConfigError("horizon list is empty");
  return out;
}

void attach_truth(PosteriorSummary& summary, const std::map<std::string, double>& truth) {
  for (auto& p : summary.parameters) {
    const auto it = truth.find(p.name);
    if (it != truth.end()) p.true_value = it->second;
  }
}

std::map<std::string, double> truth_map(const std::string& model, const json& j) {
  std::map<std::string, double> t;
  if (model == "irsv") {
    const auto p = j.get<IrSvParams>();
    t = {{"mu", p.mu}, {"phi", p.phi}, {"sigma", p.sigma_eta}};
  } else if (model == "irmsv") {
    const auto p = j.get<IrMsvParams>();
    const auto names = irmsv_param_names(p.dim());
    const VectorXd lower = p.R.lower();
    for (std::size_t n = 0; n < names.size(); ++n) {
      const Index k = static_cast<Index>(n);
      const Index d = p.dim();
      t[names[n]] = k < d ? p.mu[k] : k < 2 * d ? p.phi[k - d] : k < 3 * d ? p.sigma[k - 2 * d] : lower[k - 3 * d];
    }
  } else {
    const auto p = j.get<IrGarchParams>();
    t = {{"omega", p.omega}, {"alpha1", p.alpha1}};
    if (model == "irgarch") t["beta1"] = p.beta1;
  }
  return t;
}

// ---------------------------------------------------------------- simulate

void cmd_simulate(const SimulateArgs& a, const Common& c, Manifest& m) {
  require_file(a.params, "params file");
  m.inputs.push_back(a.params);
  const json pj = read_json(a.params);
  if (a.length < 2) throw ConfigError("length must be at least 2");
  if (a.replicates < 1) throw ConfigError("replicates must be positive");
  if (!(a.gap_mean > 0.0)) throw ConfigError("gap mean must be positive");
  m.config = {{"model", a.model}, {"params", pj}, {"length", a.length}, {"replicates", a.replicates},
              {"gap_mean", a.gap_mean}};

  // Validate once up front so a bad parameter file fails before any output.
  IrSvParams sv{};
  IrMsvParams msv;
  IrGarchParams garch{};
  if (a.model == "irsv") {
    sv = pj.get<IrSvParams>();
    validate(sv);
  } else if (a.model == "irmsv") {
    msv = pj.get<IrMsvParams>();
    validate(msv);
  } else {
    garch = pj.get<IrGarchParams>();
    if (a.model == "irarch") garch.beta1 = 0.0;
    validate(garch, VectorXd::Ones(1));
  }

  ensure_out_dir(c);
  std::vector<std::string> names(static_cast<std::size_t>(a.replicates));
  parallel_for(a.replicates, c.threads, [&](Index k) {
    Rng rng(c.seed, static_cast<std::uint64_t>(k + 1));
    const VectorXd counts = generate_poisson_gaps(a.length - 1, a.gap_mean, rng);
    SeriesTable data, truth;
    data.time = timestamps_from_gaps(counts, 0.0);
    data.gap.resize(a.length);
    data.gap[0] = std::numeric_limits<double>::quiet_NaN();
    data.gap.tail(a.length - 1) = counts;
    truth.time = data.time;
    truth.gap = data.gap;
    if (a.model == "irsv") {
      const auto path = simulate_irsv(sv, scale_gaps(counts).gaps, a.length, rng);
      data.names = {"r"};
      data.values = path.returns.transpose();
      truth.names = {"h"};
      truth.values = path.h.transpose();
    } else if (a.model == "irmsv") {
      const auto path = simulate_irmsv(msv, scale_gaps(counts).gaps, a.length, rng);
      for (Index i = 1; i <= msv.dim(); ++i) {
        data.names.push_back("r" + std::to_string(i));
        truth.names.push_back("h" + std::to_string(i));
      }
      data.values = path.returns;
      truth.values = path.h;
    } else {
      const auto path = simulate_irgarch(garch, counts, a.length, rng);
      data.names = {"r"};
      data.values = path.returns.transpose();
      truth.names = {"sigma2"};
      truth.values = path.sigma2.transpose();
    }
    const std::string stem = a.model + "_rep" + std::to_string(k + 1);
    write_series(data, out_path(c, stem + ".csv"));
    write_series(truth, out_path(c, stem + ".truth.csv"));
    names[static_cast<std::size_t>(k)] = stem;
  });
  for (const auto& stem : names) {
    m.outputs.push_back(out_path(c, stem + ".csv"));
    m.outputs.push_back(out_path(c, stem + ".truth.csv"));
  }
}

// --------------------------------------------------------------------- fit

void cmd_fit(const FitArgs& a, const Common& c, Manifest& m, std::ostream& out) {
  require_file(a.data, "data file");
  m.inputs.push_back(a.data);
  const SeriesTable table = read_series(a.data);
  if (a.holdout < 0) throw ConfigError("holdout must be nonnegative");
  if (a.chains < 1) throw ConfigError("chains must be positive");
  const Index n_fit = table.size() - a.holdout;
  if (n_fit < 2) throw DomainError("hold-out leaves too few observations to fit");
  const SeriesTable fit_part = table.slice(0, n_fit);

  std::map<std::string, double> truth;
  json truth_json = nullptr;
  if (!a.truth.empty()) {
    require_file(a.truth, "truth file");
    m.inputs.push_back(a.truth);
    truth_json = read_json(a.truth);
    truth = truth_map(a.model, truth_json);
  }
  json priors_json = json::object();
  if (!a.priors.empty()) {
    require_file(a.priors, "priors file");
    m.inputs.push_back(a.priors);
    priors_json = read_json(a.priors);
  }
  m.config = {{"model", a.model}, {"data", a.data},       {"series", a.series},   {"holdout", a.holdout},
              {"chains", a.chains}, {"truth", truth_json}, {"priors", priors_json}};

  ensure_out_dir(c);
  if (a.holdout > 0) {
    write_series(table.slice(n_fit, a.holdout), out_path(c, "holdout.csv"));
    m.outputs.push_back(out_path(c, "holdout.csv"));
  }

  const Index column = a.series.empty() ? 0 : table.column(a.series);
  if (a.model == "irgarch" || a.model == "irarch") {
    const VectorXd r = fit_part.values.row(column).transpose();
    const VectorXd gaps = fit_part.inner_gaps();
    MlOptions opt;
    opt.n_starts = a.starts;
    opt.threads = c.threads;
    opt.seed = c.seed;
    opt.arch_only = a.model == "irarch";
    m.config["starts"] = a.starts;
    const MlFit fit = fit_ml(r, gaps, opt);

    json starts = json::array();
    for (const auto& s : fit.starts) {
      starts.push_back({{"start", s.start},
                        {"estimate", s.estimate},
                        {"loglik", s.loglik},
                        {"iterations", s.iterations},
                        {"converged", s.converged},
                        {"simplex_diameter", s.diameter}});
    }
    json est = {{"model", a.model},
                {"series", table.names[static_cast<std::size_t>(column)]},
                {"n_obs", n_fit},
                {"params", fit.params},
                {"loglik", fit.loglik},
                {"converged", fit.converged},
                {"best_start", fit.best_start},
                {"std_errors", {{"omega", fit.std_errors[0]}, {"alpha1", fit.std_errors[1]}, {"beta1", fit.std_errors[2]}}},
                {"starts", starts}};
    write_json(est, out_path(c, "estimate.json"));

    PosteriorSummary table_out;
    const std::vector<std::pair<std::string, double>> values = {
        {"omega", fit.params.omega}, {"alpha1", fit.params.alpha1}, {"beta1", fit.params.beta1}};
    for (std::size_t k = 0; k < (opt.arch_only ? 2u : 3u); ++k) {
      ParameterSummary p;
      p.name = values[k].first;
      p.mean = values[k].second;
      p.sd = fit.std_errors[static_cast<Index>(k)];
      p.q_lo = p.mean - 1.959963984540054 * p.sd;
      p.q_hi = p.mean + 1.959963984540054 * p.sd;
      p.ess = std::numeric_limits<double>::quiet_NaN();
      table_out.parameters.push_back(p);
    }
    attach_truth(table_out, truth);
    write_summary(table_out, out_path(c, "estimate.csv"));
    m.outputs.push_back(out_path(c, "estimate.json"));
    m.outputs.push_back(out_path(c, "estimate.csv"));
    out << "loglik " << fit.loglik << (fit.converged ? " (converged)" : " (not converged)") << '\n';
    return;
  }

  McmcConfig cfg;
  cfg.n_iterations = a.iters;
  cfg.burn_in = a.burnin;
  cfg.thin = a.thin;
  cfg.seed = c.seed;
  cfg.latent_stride = a.latent_stride;
  cfg.store_all_latent = a.all_latent;
  cfg.progress_every = a.progress;
  cfg.validate();
  m.config["mcmc"] = cfg;

  const ScaledGaps sg = scale_gaps(fit_part.inner_gaps());
  std::vector<McmcChain> chains(static_cast<std::size_t>(a.chains));
  std::vector<std::string> series_names;
  if (a.model == "irsv") {
    const auto priors = priors_json.get<IrSvPriors>();
    const GapSeries gs = GapSeries::from_gaps(sg.gaps, fit_part.values.row(column).transpose());
    series_names = {table.names[static_cast<std::size_t>(column)]};
    parallel_for(a.chains, c.threads, [&](Index k) {
      McmcConfig ck = cfg;
      ck.chain_id = static_cast<std::uint64_t>(k);
      chains[static_cast<std::size_t>(k)] = fit_irsv(gs, priors, ck).chain;
    });
  } else {
    const auto priors = priors_json.get<IrMsvPriors>();
    series_names = table.names;
    parallel_for(a.chains, c.threads, [&](Index k) {
      McmcConfig ck = cfg;
      ck.chain_id = static_cast<std::uint64_t>(k);
      chains[static_cast<std::size_t>(k)] = fit_irmsv(fit_part.values, sg.gaps, priors, ck).chain;
    });
  }
  McmcChain chain = merge_chains(chains);
  chain.metadata["gap_scale"] = sg.scale_factor;
  chain.metadata["last_time"] = fit_part.time[n_fit - 1];
  chain.metadata["n_obs"] = static_cast<double>(n_fit);
  chain.metadata["chains"] = static_cast<double>(a.chains);
  chain.series_names = series_names;
  PosteriorSummary summary = summarize(chain);
  attach_truth(summary, truth);
  write_chain(chain, out_path(c, "chain.csv"));
  write_summary(summary, out_path(c, "summary.csv"));
  m.outputs.push_back(out_path(c, "chain.csv"));
  m.outputs.push_back(chain_sidecar_path(out_path(c, "chain.csv")));
  m.outputs.push_back(out_path(c, "summary.csv"));
  for (const auto& w : chain.warnings) out << "warning: " << w << '\n';
  for (const auto& [group, rate] : chain.acceptance) out << "acceptance " << group << ' ' << rate << '\n';
}

// ----------------------------------------------------------------- refresh

void cmd_refresh(const RefreshArgs& a, const Common& c, Manifest& m) {
  require_file(a.ticks, "tick file");
  m.inputs.push_back(a.ticks);
  m.config = {{"ticks", a.ticks}, {"aggregate", a.aggregate}};
  auto series = read_ticks(a.ticks);
  if (series.size() < 2) throw DomainError("refresh sampling needs at least two assets");
  if (a.aggregate) {
    for (auto& s : series) s = aggregate_one_second(s);
  }
  const RefreshResult res = refresh_sample(series);
  const Index mlen = res.size();
  const Index p = static_cast<Index>(res.asset_ids.size());

  ensure_out_dir(c);
  SeriesTable prices;
  prices.names = res.asset_ids;
  prices.time = res.refresh_times;
  prices.gap.resize(mlen);
  prices.gap[0] = std::numeric_limits<double>::quiet_NaN();
  for (Index j = 1; j < mlen; ++j) prices.gap[j] = res.refresh_times[j] - res.refresh_times[j - 1];
  prices.values = res.prices;
  write_series(prices, out_path(c, "refresh_prices.csv"));
  m.outputs.push_back(out_path(c, "refresh_prices.csv"));

  if (mlen >= 2) {
    SeriesTable ret = prices.slice(1, mlen - 1);
    for (Index i = 0; i < p; ++i) ret.values.row(i) = log_returns(res.prices.row(i).transpose()).transpose();
    ret.gap[0] = std::numeric_limits<double>::quiet_NaN();
    write_series(ret, out_path(c, "returns.csv"));
    m.outputs.push_back(out_path(c, "returns.csv"));
  }
  json counts = json::object();
  for (std::size_t i = 0; i < res.asset_ids.size(); ++i) counts[res.asset_ids[i]] = res.counts[i];
  m.config["refresh_times"] = mlen;
  m.config["ticks_consumed"] = counts;
}

// ---------------------------------------------------------------- forecast

void cmd_forecast(const ForecastArgs& a, const Common& c, Manifest& m, const std::string& model) {
  require_file(a.chain, "chain file");
  m.inputs.push_back(a.chain);
  const std::vector<Index> horizons = parse_horizons(a.horizons);
  const McmcChain chain = read_chain(a.chain);
  if (!model.empty() && model != chain.model) {
    throw ConfigError("chain holds a '" + chain.model + "' fit, not '" + model + "'");
  }
  const Index steps = *std::max_element(horizons.begin(), horizons.end());
  const auto meta = [&](const char* key) -> double {
    const auto it = chain.metadata.find(key);
    if (it == chain.metadata.end()) throw DomainError(std::string("chain metadata lacks '") + key + "'");
    return it->second;
  };
  const double scale = meta("gap_scale");

  VectorXd gaps;
  if (!a.data.empty()) {
    require_file(a.data, "data file");
    m.inputs.push_back(a.data);
    const SeriesTable future = read_series(a.data);
    gaps = future.gap;
    if (std::isnan(gaps[0])) gaps[0] = future.time[0] - meta("last_time");
    if (!(gaps[0] > 0.0)) throw DomainError("forecast data must start after the fitted sample");
    if (gaps.size() < steps) throw DomainError("forecast data has fewer rows than the largest horizon");
    gaps = gaps.head(steps).eval();
  } else {
    if (!(a.gap > 0.0)) throw ConfigError("give --data or a positive --gap");
    gaps = VectorXd::Constant(steps, a.gap);
  }
  gaps /= scale;

  std::vector<std::string> assets = chain.series_names;
  if (assets.empty()) {
    const Index p = chain.model == "irmsv" ? static_cast<Index>(std::count_if(
                                                 chain.param_names.begin(), chain.param_names.end(),
                                                 [](const std::string& n) { return n.rfind("mu_", 0) == 0; }))
                                           : 1;
    for (Index i = 1; i <= p; ++i) assets.push_back("r" + std::to_string(i));
  }

  ForecastOptions opt;
  opt.horizons = horizons;
  opt.paths_per_draw = a.paths;
  opt.max_draws = a.max_draws;
  opt.seed = c.seed;
  opt.threads = c.threads;
  m.config = {{"chain", a.chain}, {"data", a.data},         {"horizons", horizons},
              {"paths", a.paths}, {"max_draws", a.max_draws}, {"gap", a.gap}};
  const auto rows = forecast_from_chain(chain, assets, gaps, opt);
  ensure_out_dir(c);
  write_forecast(rows, out_path(c, "forecast.csv"));
  m.outputs.push_back(out_path(c, "forecast.csv"));
}

// ----------------------------------------------------------------- compare

void cmd_compare(const CompareArgs& a, const Common& c, Manifest& m) {
  if (a.forecasts.empty()) throw ConfigError("no forecast files given");
  require_file(a.holdout, "hold-out file");
  const SeriesTable holdout = read_series(a.holdout);
  m.inputs = a.forecasts;
  m.inputs.push_back(a.holdout);
  m.config = {{"forecasts", a.forecasts}, {"holdout", a.holdout}};

  // (model, target, horizon) -> (sum of absolute errors over assets, assets)
  std::map<std::tuple<std::string, int, Index>, std::pair<double, Index>> acc;
  for (const auto& f : a.forecasts) {
    require_file(f, "forecast file");
    for (const auto& row : read_forecast(f)) {
      const VectorXd realized = holdout.values.row(holdout.column(row.asset)).transpose();
      for (auto t : {CompareTarget::SquaredReturn, CompareTarget::AbsReturn, CompareTarget::Volatility}) {
        auto& cell = acc[{row.model, static_cast<int>(t), row.horizon}];
        cell.first += forecast_abs_error(row, t, realized);
        cell.second += 1;
      }
    }
  }
  ensure_out_dir(c);
  const std::string path = out_path(c, "mae.csv");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "model,target,horizon,mae,n_assets\n";
  for (const auto& [key, cell] : acc) {
    const auto& [model, target, horizon] = key;
    out << model << ',' << to_string(static_cast<CompareTarget>(target)) << ',' << horizon << ','
        << format_double(cell.first / static_cast<double>(cell.second)) << ',' << cell.second << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
  m.outputs.push_back(path);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  return kExitValidation;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Random seed")->envname("IRVOL_SEED")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")
      ->envname("IRVOL_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output directory")->envname("IRVOL_OUT")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run_cli(args, out, err);
}

int run_cli(const std::vector<std::string>& args) { return run_cli(args, std::cout, std::cerr); }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volatility models for irregularly spaced time series", "irvol"};
  app.set_config("--config", "", "Read options from a TOML/INI config file");
  app.set_version_flag("--version", IRVOL_VERSION);
  app.require_subcommand(1);

  Common common;
  SimulateArgs sa;
  FitArgs fa;
  RefreshArgs ra;
  ForecastArgs foa;
  CompareArgs ca;
  std::string forecast_model;
  std::string replay_manifest;

  const std::vector<std::string> all_models{"irsv", "irmsv", "irgarch", "irarch"};

  auto* sim = app.add_subcommand("simulate", "Simulate replicate data sets");
  sim->add_option("--model", sa.model, "irsv, irmsv, irgarch or irarch")
      ->required()
      ->check(CLI::IsMember(all_models));
  sim->add_option("--params", sa.params, "Parameter JSON file")->required();
  sim->add_option("-T,--length", sa.length, "Observations per replicate")->capture_default_str();
  sim->add_option("--replicates", sa.replicates, "Number of replicates")->capture_default_str();
  sim->add_option("--gap-mean", sa.gap_mean, "Poisson mean of the gap counts")->capture_default_str();
  add_common(sim, common);

  auto* fit = app.add_subcommand("fit", "Fit a model to a series file");
  fit->add_option("--model", fa.model, "irsv, irmsv, irgarch or irarch")
      ->required()
      ->check(CLI::IsMember(all_models));
  fit->add_option("--data", fa.data, "Series file (time,gap,columns...)")->required();
  fit->add_option("--series", fa.series, "Column to fit (univariate models)");
  fit->add_option("--priors", fa.priors, "Prior JSON file");
  fit->add_option("--truth", fa.truth, "True parameter JSON, added to the summary");
  fit->add_option("--iters", fa.iters, "MCMC iterations")->envname("IRVOL_ITERS")->capture_default_str();
  fit->add_option("--burnin", fa.burnin, "Burn-in iterations")->envname("IRVOL_BURNIN")->capture_default_str();
  fit->add_option("--thin", fa.thin, "Thinning interval")->envname("IRVOL_THIN")->capture_default_str();
  fit->add_option("--chains", fa.chains, "Independent chains")->capture_default_str();
  fit->add_option("--holdout", fa.holdout, "Trailing observations held out")->capture_default_str();
  fit->add_option("--latent-stride", fa.latent_stride, "Store every n-th latent state")->capture_default_str();
  fit->add_flag("--all-latent", fa.all_latent, "Store every latent state");
  fit->add_option("--starts", fa.starts, "Optimizer starts (ML models)")->capture_default_str();
  fit->add_option("--progress", fa.progress, "Progress line every n iterations");
  add_common(fit, common);

  auto* ref = app.add_subcommand("refresh", "Synchronize tick data on refresh times");
  ref->add_option("--ticks", ra.ticks, "Tick CSV (asset,timestamp,price)")->required();
  ref->add_flag("--aggregate,!--no-aggregate", ra.aggregate, "One-second aggregation first (default on)");
  add_common(ref, common);

  auto* fc = app.add_subcommand("forecast", "Posterior predictive volatility forecasts");
  fc->add_option("--model", forecast_model, "Expected chain model")->check(CLI::IsMember({"irsv", "irmsv"}));
  fc->add_option("--chain", foa.chain, "Chain CSV written by fit")->required();
  fc->add_option("--data", foa.data, "Series file whose times give the future gaps");
  fc->add_option("--gap", foa.gap, "Constant future gap (original time unit) when no data file is given");
  fc->add_option("--horizons", foa.horizons, "Comma-separated horizons")->capture_default_str();
  fc->add_option("--paths", foa.paths, "Forward paths per posterior draw")->capture_default_str();
  fc->add_option("--max-draws", foa.max_draws, "Use at most this many posterior draws (0 = all)");
  add_common(fc, common);

  auto* cmp = app.add_subcommand("compare", "Mean absolute forecast error per horizon");
  cmp->add_option("--forecasts", ca.forecasts, "Forecast files")->required()->expected(1, -1);
  cmp->add_option("--holdout", ca.holdout, "Hold-out series file")->required();
  add_common(cmp, common);

  auto* rep = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rep->add_option("manifest", replay_manifest, "manifest.json")->required();
  std::string replay_out;
  rep->add_option("--out", replay_out, "Output directory (defaults to the recorded one)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (rep->parsed()) {
    try {
      const json mj = read_json(replay_manifest);
      auto argv = mj.at("argv").get<std::vector<std::string>>();
      if (!replay_out.empty()) {
        std::vector<std::string> kept;
        for (std::size_t k = 0; k < argv.size(); ++k) {
          if (argv[k] == "--out") {
            ++k;
            continue;
          }
          if (argv[k].rfind("--out=", 0) == 0) continue;
          kept.push_back(argv[k]);
        }
        kept.push_back("--out");
        kept.push_back(replay_out);
        argv = std::move(kept);
      }
      return run_cli(argv, out, err);
    } catch (const nlohmann::json::exception& e) {
      err << "error: malformed manifest: " << e.what() << '\n';
      return kExitValidation;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return exit_code_for(e);
    }
  }

  Manifest manifest;
  manifest.argv = args;
  const std::string started = iso_now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (sim->parsed()) {
      manifest.subcommand = "simulate";
      cmd_simulate(sa, common, manifest);
    } else if (fit->parsed()) {
      manifest.subcommand = "fit";
      cmd_fit(fa, common, manifest, out);
    } else if (ref->parsed()) {
      manifest.subcommand = "refresh";
      cmd_refresh(ra, common, manifest);
    } else if (fc->parsed()) {
      manifest.subcommand = "forecast";
      cmd_forecast(foa, common, manifest, forecast_model);
    } else if (cmp->parsed()) {
      manifest.subcommand = "compare";
      cmd_compare(ca, common, manifest);
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(manifest, common, started, elapsed);
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid JSON content: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}

}  // namespace irvol

#include "irvol/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "irvol/error.hpp"

namespace irvol {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void check_written(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

bool is_ascii(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

// Latent-state columns are named h[j] or h_i[j].
bool is_latent_name(const std::string& name) {
  return name.size() > 3 && name[0] == 'h' && (name[1] == '[' || name[1] == '_') && name.back() == ']';
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, long line) {
  text = trim(text);
  if (text.empty()) throw FormatError("empty numeric field", line);
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError("cannot parse number '" + std::string(text) + "'", line);
  }
  return value;
}

double parse_timestamp(std::string_view text, long line) {
  text = trim(text);
  if (text.size() >= 19 && text[4] == '-' && text[7] == '-' && (text[10] == 'T' || text[10] == ' ')) {
    auto field = [&](std::size_t pos, std::size_t len) {
      int v = 0;
      const auto res = std::from_chars(text.data() + pos, text.data() + pos + len, v);
      if (res.ec != std::errc() || res.ptr != text.data() + pos + len) {
        throw FormatError("bad timestamp '" + std::string(text) + "'", line);
      }
      return v;
    };
    if (text[13] != ':' || text[16] != ':') throw FormatError("bad timestamp '" + std::string(text) + "'", line);
    using namespace std::chrono;
    const year_month_day ymd{year{field(0, 4)}, month{static_cast<unsigned>(field(5, 2))},
                             day{static_cast<unsigned>(field(8, 2))}};
    if (!ymd.ok()) throw FormatError("invalid date '" + std::string(text) + "'", line);
    const int hh = field(11, 2), mm = field(14, 2), ss = field(17, 2);
    if (hh > 23 || mm > 59 || ss > 60) throw FormatError("invalid time '" + std::string(text) + "'", line);
    std::string_view rest = text.substr(19);
    if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
    double frac = 0.0;
    if (!rest.empty()) {
      if (rest.front() != '.') throw FormatError("bad timestamp '" + std::string(text) + "'", line);
      frac = parse_double("0" + std::string(rest), line);
    }
    const auto days = sys_days(ymd).time_since_epoch().count();
    return static_cast<double>(days) * 86400.0 + hh * 3600.0 + mm * 60.0 + ss + frac;
  }
  return parse_double(text, line);
}

std::vector<TickSeries> read_ticks(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw FormatError("empty tick file '" + path + "'");
  ++lineno;
  const auto header = split_csv(line);
  if (header.size() != 3 || header[0] != "asset" || header[1] != "timestamp" || header[2] != "price") {
    throw FormatError("tick file header must be asset,timestamp,price", lineno);
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 3) throw FormatError("expected 3 fields", lineno);
    if (f[0].empty()) throw FormatError("empty asset name", lineno);
    const double t = parse_timestamp(f[1], lineno);
    const double p = parse_double(f[2], lineno);
    if (!std::isfinite(t)) throw FormatError("non-finite timestamp", lineno);
    if (!(p > 0.0) || !std::isfinite(p)) throw FormatError("price must be positive", lineno);
    const std::string asset(f[0]);
    auto [it, inserted] = rows.try_emplace(asset);
    if (inserted) order.push_back(asset);
    it->second.emplace_back(t, p);
  }
  if (order.empty()) throw FormatError("tick file '" + path + "' has no rows");
  std::vector<TickSeries> out;
  for (const auto& asset : order) {
    auto& r = rows[asset];
    std::stable_sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<double, double>> dedup;
    for (const auto& row : r) {
      if (!dedup.empty() && dedup.back().first == row.first) {
        dedup.back() = row;
      } else {
        dedup.push_back(row);
      }
    }
    TickSeries s;
    s.asset_id = asset;
    s.timestamps.resize(static_cast<Index>(dedup.size()));
    s.prices.resize(static_cast<Index>(dedup.size()));
    for (std::size_t k = 0; k < dedup.size(); ++k) {
      s.timestamps[static_cast<Index>(k)] = dedup[k].first;
      s.prices[static_cast<Index>(k)] = dedup[k].second;
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_ticks(const std::vector<TickSeries>& series, const std::string& path) {
  auto out = open_output(path);
  out << "asset,timestamp,price\n";
  for (const auto& s : series) {
    for (Index k = 0; k < s.size(); ++k) {
      out << s.asset_id << ',' << format_double(s.timestamps[k]) << ',' << format_double(s.prices[k]) << '\n';
    }
  }
  check_written(out, path);
}

Index SeriesTable::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DomainError("no column named '" + name + "'");
  return static_cast<Index>(it - names.begin());
}

SeriesTable SeriesTable::slice(Index begin, Index count) const {
  if (begin < 0 || count < 0 || begin + count > size()) throw DomainError("slice out of range");
  SeriesTable out;
  out.names = names;
  out.time = time.segment(begin, count);
  out.gap = gap.segment(begin, count);
  out.values = values.middleCols(begin, count);
  return out;
}

GapSeries SeriesTable::series(Index c) const {
  if (c < 0 || c >= values.rows()) throw DomainError("column index out of range");
  GapSeries s;
  s.timestamps = time;
  s.values = values.row(c).transpose();
  s.gaps = inner_gaps();
  return s;
}

void write_series(const SeriesTable& table, const std::string& path) {
  if (table.gap.size() != table.size() || table.values.cols() != table.size() ||
      table.values.rows() != static_cast<Index>(table.names.size())) {
    throw DomainError("series table dimensions disagree");
  }
  auto out = open_output(path);
  out << "time,gap";
  for (const auto& n : table.names) {
    if (n.empty() || n.find(',') != std::string::npos) throw DomainError("invalid column name '" + n + "'");
    out << ',' << n;
  }
  out << '\n';
  for (Index j = 0; j < table.size(); ++j) {
    out << format_double(table.time[j]) << ',' << format_double(table.gap[j]);
    for (Index i = 0; i < table.values.rows(); ++i) out << ',' << format_double(table.values(i, j));
    out << '\n';
  }
  check_written(out, path);
}

SeriesTable read_series(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  long lineno = 1;
  if (!std::getline(in, line)) throw FormatError("empty series file '" + path + "'");
  const auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "time" || header[1] != "gap") {
    throw FormatError("series header must be time,gap,<columns...>", lineno);
  }
  SeriesTable table;
  for (std::size_t k = 2; k < header.size(); ++k) table.names.emplace_back(header[k]);
  const std::size_t p = table.names.size();
  std::vector<double> time, gap, vals;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != p + 2) throw FormatError("expected " + std::to_string(p + 2) + " fields", lineno);
    const double t = parse_double(f[0], lineno);
    const double g = parse_double(f[1], lineno);
    if (!time.empty()) {
      if (!(t > time.back())) throw FormatError("times must be strictly increasing", lineno);
      const double expected = t - time.back();
      if (!(std::abs(g - expected) <= kTimeTolerance * std::max(1.0, std::abs(t)))) {
        throw FormatError("gap disagrees with time difference", lineno);
      }
    } else if (!std::isnan(g) && !(g > 0.0)) {
      throw FormatError("gap must be positive", lineno);
    }
    time.push_back(t);
    gap.push_back(g);
    for (std::size_t k = 0; k < p; ++k) {
      const double v = parse_double(f[k + 2], lineno);
      if (!std::isfinite(v)) throw FormatError("non-finite value", lineno);
      vals.push_back(v);
    }
  }
  const auto T = static_cast<Index>(time.size());
  if (T == 0) throw FormatError("series file '" + path + "' has no rows");
  table.time = Eigen::Map<VectorXd>(time.data(), T);
  table.gap = Eigen::Map<VectorXd>(gap.data(), T);
  table.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>>(vals.data(),
                                                                                   static_cast<Index>(p), T);
  return table;
}

std::string chain_sidecar_path(const std::string& path) { return path + ".meta.json"; }

void write_chain(const McmcChain& chain, const std::string& path) {
  if (chain.draws.cols() != static_cast<Index>(chain.param_names.size()) ||
      chain.latent_draws.cols() != static_cast<Index>(chain.latent_names.size()) ||
      (chain.latent_draws.cols() > 0 && chain.latent_draws.rows() != chain.draws.rows())) {
    throw DomainError("chain dimensions disagree with its names");
  }
  {
    auto out = open_output(path);
    bool first = true;
    for (const auto* names : {&chain.param_names, &chain.latent_names}) {
      for (const auto& n : *names) {
        if (n.find(',') != std::string::npos) throw DomainError("invalid column name '" + n + "'");
        out << (first ? "" : ",") << n;
        first = false;
      }
    }
    out << '\n';
    std::string row;
    for (Index d = 0; d < chain.n_draws(); ++d) {
      row.clear();
      for (Index k = 0; k < chain.draws.cols(); ++k) {
        if (k > 0) row += ',';
        row += format_double(chain.draws(d, k));
      }
      for (Index k = 0; k < chain.latent_draws.cols(); ++k) {
        row += ',';
        row += format_double(chain.latent_draws(d, k));
      }
      out << row << '\n';
    }
    check_written(out, path);
  }
  nlohmann::json meta;
  meta["format"] = kChainFormat;
  meta["model"] = chain.model;
  meta["param_names"] = chain.param_names;
  meta["latent_names"] = chain.latent_names;
  meta["acceptance"] = nlohmann::json::array();
  for (const auto& [name, rate] : chain.acceptance) meta["acceptance"].push_back({{"group", name}, {"rate", rate}});
  meta["config"] = chain.config ? nlohmann::json(*chain.config) : nlohmann::json(nullptr);
  meta["warnings"] = chain.warnings;
  meta["metadata"] = chain.metadata;
  meta["series_names"] = chain.series_names;
  write_json(meta, chain_sidecar_path(path));
}

McmcChain read_chain(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  long lineno = 1;
  if (!std::getline(in, line)) throw FormatError("empty chain file '" + path + "'");
  std::vector<std::string> header;
  for (auto f : split_csv(line)) header.emplace_back(f);
  if (header.empty() || header[0].empty()) throw FormatError("chain file has no header", lineno);

  McmcChain chain;
  const std::string sidecar = chain_sidecar_path(path);
  if (std::filesystem::exists(sidecar)) {
    nlohmann::json meta;
    try {
      meta = read_json(sidecar);
    } catch (const nlohmann::json::exception& e) {
      throw VersionError(std::string("unreadable chain metadata: ") + e.what());
    }
    if (!meta.is_object() || meta.value("format", std::string()) != kChainFormat) {
      throw VersionError("chain metadata is not " + std::string(kChainFormat));
    }
    try {
      chain.model = meta.at("model").get<std::string>();
      chain.param_names = meta.at("param_names").get<std::vector<std::string>>();
      chain.latent_names = meta.at("latent_names").get<std::vector<std::string>>();
      for (const auto& a : meta.at("acceptance")) {
        chain.acceptance.emplace_back(a.at("group").get<std::string>(), a.at("rate").get<double>());
      }
      if (!meta.at("config").is_null()) chain.config = meta.at("config").get<McmcConfig>();
      chain.warnings = meta.at("warnings").get<std::vector<std::string>>();
      chain.metadata = meta.at("metadata").get<std::map<std::string, double>>();
      chain.series_names = meta.value("series_names", std::vector<std::string>{});
    } catch (const nlohmann::json::exception& e) {
      throw VersionError(std::string("chain metadata schema mismatch: ") + e.what());
    }
    std::vector<std::string> expected = chain.param_names;
    expected.insert(expected.end(), chain.latent_names.begin(), chain.latent_names.end());
    if (expected != header) throw VersionError("chain header does not match its metadata", lineno);
  } else {
    chain.warnings.push_back("metadata sidecar '" + sidecar + "' missing; config and acceptance rates unavailable");
    for (const auto& n : header) (is_latent_name(n) ? chain.latent_names : chain.param_names).push_back(n);
    const auto has = [&](const char* n) {
      return std::find(header.begin(), header.end(), n) != header.end();
    };
    chain.model = has("mu") ? "irsv" : has("mu_1") ? "irmsv" : "";
    // Latent columns must follow the parameters for the split to be faithful.
    std::vector<std::string> expected = chain.param_names;
    expected.insert(expected.end(), chain.latent_names.begin(), chain.latent_names.end());
    if (expected != header) throw FormatError("latent columns must follow parameter columns", lineno);
  }

  const std::size_t width = header.size();
  const std::size_t n_params = chain.param_names.size();
  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != width) {
      throw FormatError("row has " + std::to_string(f.size()) + " fields, header has " + std::to_string(width),
                        lineno);
    }
    for (const auto& v : f) values.push_back(parse_double(v, lineno));
    ++rows;
  }
  chain.draws.resize(rows, static_cast<Index>(n_params));
  chain.latent_draws.resize(rows, static_cast<Index>(width - n_params));
  for (Index d = 0; d < rows; ++d) {
    for (std::size_t k = 0; k < width; ++k) {
      const double v = values[static_cast<std::size_t>(d) * width + k];
      if (k < n_params) {
        chain.draws(d, static_cast<Index>(k)) = v;
      } else {
        chain.latent_draws(d, static_cast<Index>(k - n_params)) = v;
      }
    }
  }
  return chain;
}

void write_summary(const PosteriorSummary& summary, const std::string& path) {
  for (const auto& p : summary.parameters) {
    if (!is_ascii(p.name)) throw FormatError("parameter name '" + p.name + "' is not ASCII");
    if (p.name.empty() || p.name.find(',') != std::string::npos) {
      throw FormatError("invalid parameter name '" + p.name + "'");
    }
  }
  const bool with_truth = std::any_of(summary.parameters.begin(), summary.parameters.end(),
                                      [](const ParameterSummary& p) { return p.true_value.has_value(); });
  auto out = open_output(path);
  out << "parameter," << (with_truth ? "true_value," : "") << "mean,sd,q2.5,q97.5,ess\n";
  auto fixed4 = [](double x) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << x;
    return s.str();
  };
  for (const auto& p : summary.parameters) {
    out << p.name << ',';
    if (with_truth) out << (p.true_value ? fixed4(*p.true_value) : std::string("nan")) << ',';
    out << fixed4(p.mean) << ',' << fixed4(p.sd) << ',' << fixed4(p.q_lo) << ',' << fixed4(p.q_hi) << ','
        << std::fixed << std::setprecision(1) << p.ess << '\n';
  }
  check_written(out, path);
}

namespace {

const char* const kForecastHeader =
    "model,asset,horizon,h_mean,h_lo,h_hi,var_mean,var_lo,var_hi,vol_mean,r2_mean,abs_r_mean";

}  // namespace

void write_forecast(const std::vector<ForecastRow>& rows, const std::string& path) {
  auto out = open_output(path);
  out << kForecastHeader << '\n';
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << r.model << ',' << r.asset << ',' << r.horizon;
    for (double v : {s.h_mean, s.h_lo, s.h_hi, s.var_mean, s.var_lo, s.var_hi, s.vol_mean, s.r2_mean, s.abs_r_mean}) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
  check_written(out, path);
}

std::vector<ForecastRow> read_forecast(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  long lineno = 1;
  if (!std::getline(in, line) || trim(line) != kForecastHeader) {
    throw FormatError("forecast header must be " + std::string(kForecastHeader), lineno);
  }
  std::vector<ForecastRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 12) throw FormatError("expected 12 fields", lineno);
    ForecastRow r;
    r.model = std::string(f[0]);
    r.asset = std::string(f[1]);
    const double hz = parse_double(f[2], lineno);
    if (!(hz >= 1.0) || hz != std::floor(hz)) throw FormatError("horizon must be a positive integer", lineno);
    r.horizon = static_cast<Index>(hz);
    r.summary.step = r.horizon;
    double* fields[] = {&r.summary.h_mean,  &r.summary.h_lo,     &r.summary.h_hi,
                        &r.summary.var_mean, &r.summary.var_lo,  &r.summary.var_hi,
                        &r.summary.vol_mean, &r.summary.r2_mean, &r.summary.abs_r_mean};
    for (std::size_t k = 0; k < 9; ++k) *fields[k] = parse_double(f[k + 3], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json read_json(const std::string& path) {
  auto in = open_input(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  check_written(out, path);
}

void to_json(nlohmann::json& j, const McmcConfig& c) {
  j = {{"n_iterations", c.n_iterations},
       {"burn_in", c.burn_in},
       {"thin", c.thin},
       {"target_accept_scalar", c.target_accept_scalar},
       {"target_accept_block", c.target_accept_block},
       {"adapt_interval", c.adapt_interval},
       {"seed", c.seed},
       {"chain_id", c.chain_id},
       {"latent_stride", c.latent_stride},
       {"store_all_latent", c.store_all_latent},
       {"use_likelihood", c.use_likelihood}};
}

void from_json(const nlohmann::json& j, McmcConfig& c) {
  const McmcConfig d;
  c.n_iterations = j.value("n_iterations", d.n_iterations);
  c.burn_in = j.value("burn_in", d.burn_in);
  c.thin = j.value("thin", d.thin);
  c.target_accept_scalar = j.value("target_accept_scalar", d.target_accept_scalar);
  c.target_accept_block = j.value("target_accept_block", d.target_accept_block);
  c.adapt_interval = j.value("adapt_interval", d.adapt_interval);
  c.seed = j.value("seed", d.seed);
  c.chain_id = j.value("chain_id", d.chain_id);
  c.latent_stride = j.value("latent_stride", d.latent_stride);
  c.store_all_latent = j.value("store_all_latent", d.store_all_latent);
  c.use_likelihood = j.value("use_likelihood", d.use_likelihood);
}

void to_json(nlohmann::json& j, const IrSvParams& p) {
  j = {{"mu", p.mu}, {"phi", p.phi}, {"sigma_eta", p.sigma_eta}};
}

void from_json(const nlohmann::json& j, IrSvParams& p) {
  p.mu = j.at("mu").get<double>();
  p.phi = j.at("phi").get<double>();
  p.sigma_eta = j.contains("sigma_eta") ? j.at("sigma_eta").get<double>() : j.at("sigma").get<double>();
}

namespace {

VectorXd json_vector(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> std_vector(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

void to_json(nlohmann::json& j, const IrMsvParams& p) {
  j = {{"mu", std_vector(p.mu)},
       {"phi", std_vector(p.phi)},
       {"sigma", std_vector(p.sigma)},
       {"rho", std_vector(p.R.lower())}};
}

void from_json(const nlohmann::json& j, IrMsvParams& p) {
  p.mu = json_vector(j.at("mu"));
  p.phi = json_vector(j.at("phi"));
  p.sigma = json_vector(j.at("sigma"));
  const Index dim = p.mu.size();
  if (j.contains("R")) {
    const auto rows = j.at("R").get<std::vector<std::vector<double>>>();
    MatrixXd R(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (rows[a].size() != rows.size()) throw MatrixError("R must be square");
      for (std::size_t b = 0; b < rows.size(); ++b) R(static_cast<Index>(a), static_cast<Index>(b)) = rows[a][b];
    }
    p.R = CorrelationMatrix(R);
  } else if (j.contains("rho")) {
    const VectorXd lower = json_vector(j.at("rho"));
    if (lower.size() != dim * (dim - 1) / 2) throw ParameterError("rho needs p(p-1)/2 entries");
    p.R = CorrelationMatrix::from_lower(dim, lower);
  } else {
    p.R = CorrelationMatrix::identity(dim);
  }
}

void to_json(nlohmann::json& j, const IrGarchParams& p) {
  j = {{"omega", p.omega}, {"alpha1", p.alpha1}, {"beta1", p.beta1}};
}

void from_json(const nlohmann::json& j, IrGarchParams& p) {
  p.omega = j.at("omega").get<double>();
  p.alpha1 = j.at("alpha1").get<double>();
  p.beta1 = j.value("beta1", 0.0);
}

namespace {

void read_normal(const nlohmann::json& j, const char* key, NormalPrior& n) {
  if (!j.contains(key)) return;
  n.mean = j.at(key).value("mean", n.mean);
  n.variance = j.at(key).value("variance", n.variance);
}

void read_gamma(const nlohmann::json& j, const char* key, GammaPrior& g) {
  if (!j.contains(key)) return;
  g.shape = j.at(key).value("shape", g.shape);
  g.rate = j.at(key).value("rate", g.rate);
}

}  // namespace

void to_json(nlohmann::json& j, const IrSvPriors& p) {
  j = {{"phi_beta", {{"a", p.phi_beta.a}, {"b", p.phi_beta.b}}},
       {"precision_gamma", {{"shape", p.precision_gamma.shape}, {"rate", p.precision_gamma.rate}}},
       {"mu_normal", {{"mean", p.mu_normal.mean}, {"variance", p.mu_normal.variance}}}};
}

void from_json(const nlohmann::json& j, IrSvPriors& p) {
  if (j.contains("phi_beta")) {
    p.phi_beta.a = j.at("phi_beta").value("a", p.phi_beta.a);
    p.phi_beta.b = j.at("phi_beta").value("b", p.phi_beta.b);
  }
  read_gamma(j, "precision_gamma", p.precision_gamma);
  read_normal(j, "mu_normal", p.mu_normal);
}

void to_json(nlohmann::json& j, const IrMsvPriors& p) {
  j = {{"mu_normal", {{"mean", p.mu_normal.mean}, {"variance", p.mu_normal.variance}}},
       {"precision_gamma", {{"shape", p.precision_gamma.shape}, {"rate", p.precision_gamma.rate}}},
       {"phi_normal", {{"mean", p.phi_normal.mean}, {"variance", p.phi_normal.variance}}},
       {"lkj_eta", p.lkj_eta}};
}

void from_json(const nlohmann::json& j, IrMsvPriors& p) {
  read_normal(j, "mu_normal", p.mu_normal);
  read_gamma(j, "precision_gamma", p.precision_gamma);
  read_normal(j, "phi_normal", p.phi_normal);
  p.lkj_eta = j.value("lkj_eta", p.lkj_eta);
}

}  // namespace irvol

#ifndef IRVOL_DATAIO_HPP
#define IRVOL_DATAIO_HPP

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "irvol/core.hpp"
#include "irvol/forecast.hpp"
#include "irvol/irgarch.hpp"
#include "irvol/irmsv.hpp"
#include "irvol/irsv.hpp"
#include "irvol/mcmc.hpp"

namespace irvol {

inline constexpr const char* kChainFormat = "irvol-chain-v1";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
/// Strict parse of a whole field; throws FormatError with `line` on failure.
double parse_double(std::string_view text, long line = -1);

/// Epoch seconds, or ISO-8601 `YYYY-MM-DD[T ]HH:MM:SS[.fff][Z]` read as UTC.
double parse_timestamp(std::string_view text, long line = -1);

/// Reads `asset,timestamp,price` rows. Assets keep their order of first
/// appearance; rows are stably sorted by time and a repeated timestamp keeps
/// the later row.
std::vector<TickSeries> read_ticks(const std::string& path);
void write_ticks(const std::vector<TickSeries>& series, const std::string& path);

/// Columns `time,gap,<name...>`. gap[0] is NaN when the first row has no
/// predecessor (a full series) and finite for a slice such as a hold-out.
struct SeriesTable {
  std::vector<std::string> names;
  VectorXd time;
  VectorXd gap;
  MatrixXd values;  // columns x rows of the file: names.size() x T

  Index size() const { return time.size(); }
  Index column(const std::string& name) const;
  /// gap[1..T-1]
  VectorXd inner_gaps() const { return gap.tail(std::max<Index>(size() - 1, 0)); }
  SeriesTable slice(Index begin, Index count) const;
  GapSeries series(Index column) const;
};

void write_series(const SeriesTable& table, const std::string& path);
SeriesTable read_series(const std::string& path);

/// Draws go to `path` (parameters then latent states); config, acceptance,
/// warnings and metadata to the `path.meta.json` sidecar.
void write_chain(const McmcChain& chain, const std::string& path);
McmcChain read_chain(const std::string& path);
std::string chain_sidecar_path(const std::string& path);

/// `parameter,[true_value,]mean,sd,q2.5,q97.5,ess`, four decimals.
void write_summary(const PosteriorSummary& summary, const std::string& path);

/// `model,asset,horizon,` followed by the HorizonSummary fields.
void write_forecast(const std::vector<ForecastRow>& rows, const std::string& path);
std::vector<ForecastRow> read_forecast(const std::string& path);

void to_json(nlohmann::json& j, const McmcConfig& c);
void from_json(const nlohmann::json& j, McmcConfig& c);
void to_json(nlohmann::json& j, const IrSvParams& p);
void from_json(const nlohmann::json& j, IrSvParams& p);
void to_json(nlohmann::json& j, const IrMsvParams& p);
void from_json(const nlohmann::json& j, IrMsvParams& p);
void to_json(nlohmann::json& j, const IrGarchParams& p);
void from_json(const nlohmann::json& j, IrGarchParams& p);
void to_json(nlohmann::json& j, const IrSvPriors& p);
void from_json(const nlohmann::json& j, IrSvPriors& p);
void to_json(nlohmann::json& j, const IrMsvPriors& p);
void from_json(const nlohmann::json& j, IrMsvPriors& p);

nlohmann::json read_json(const std::string& path);
void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace irvol

#endif  // IRVOL_DATAIO_HPP

#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "prl/closed_form.hpp"
#include "prl/experiments.hpp"
#include "prl/model.hpp"
#include "prl/moments.hpp"
#include "prl/replica.hpp"

namespace prl {

// JSON bindings (nlohmann ADL hooks). Doubles serialize with shortest
// round-trip precision, so dump/parse reproduces values exactly.

void to_json(nlohmann::json& j, const MomentSet& m);
void from_json(const nlohmann::json& j, MomentSet& m);

void to_json(nlohmann::json& j, const PortfolioSolution& s);
void from_json(const nlohmann::json& j, PortfolioSolution& s);

void to_json(nlohmann::json& j, const GeometryStats& g);
void from_json(const nlohmann::json& j, GeometryStats& g);

void to_json(nlohmann::json& j, const ReplicaPrediction& p);
void from_json(const nlohmann::json& j, ReplicaPrediction& p);

void to_json(nlohmann::json& j, const AssetParameters& p);
void from_json(const nlohmann::json& j, AssetParameters& p);

void to_json(nlohmann::json& j, const SweepConfig& c);
void from_json(const nlohmann::json& j, SweepConfig& c);

void to_json(nlohmann::json& j, const ConvergenceReport& r);
void from_json(const nlohmann::json& j, ConvergenceReport& r);

/// Parses {"assets": [{"r": <real>, "v": <real>}, ...]}.
AssetParameters load_asset_params(const std::filesystem::path& path);

SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Return-history CSV: one row per asset, p comma-separated columns, with a
/// leading `# asset,period_1..period_p` comment. Values print as %.17g and
/// reload bit for bit.
void write_returns_csv(const std::filesystem::path& path, const Eigen::MatrixXd& raw);

/// Loads a raw return table (comment lines skipped, shape validated).
/// Throws ConfigError on ragged rows or parse failures.
Eigen::MatrixXd load_returns_csv(const std::filesystem::path& path);

/// Loads returns and pairs them with asset parameters; enforces row count ==
/// n_assets (ConfigError) and p > N (RegularityError).
ReturnSample load_return_sample(const std::filesystem::path& path,
                                const AssetParameters& params,
                                MeanConvention convention = MeanConvention::kTrueMeans);

/// Two-column `R,eps` CSV with a comment header carrying r1, v, eps0.
void write_frontier_csv(const std::filesystem::path& path, const FrontierCurve& curve);

/// Flat report CSV `N,alpha,quantity,replica,mean,stderr,rel_error`; metadata
/// rides in comment header lines.
void write_report_csv(const std::filesystem::path& path, const ConvergenceReport& report);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json load_json_file(const std::filesystem::path& path);

/// %.17g formatting used by every CSV writer.
std::string format_double(double x);

}  // namespace prl

#include "prl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "prl/errors.hpp"

namespace prl {

namespace {

nlohmann::json optional_to_json(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("expected a JSON array of reals");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

double parse_real(const std::string& token, const std::filesystem::path& path) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || end == nullptr || *end != '\0') {
    throw ConfigError("unparseable numeric field '" + token + "' in " + path.string());
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void to_json(nlohmann::json& j, const MomentSet& m) {
  j = nlohmann::json{{"g0", m.g0},  {"g1", m.g1}, {"g2", m.g2},   {"f0", m.f0},
                     {"f1", m.f1},  {"f2", m.f2}, {"R1", m.r1},   {"V", m.v},
                     {"Vf", m.vf},  {"eps0", m.eps0}};
}

void from_json(const nlohmann::json& j, MomentSet& m) {
  j.at("g0").get_to(m.g0);
  j.at("g1").get_to(m.g1);
  j.at("g2").get_to(m.g2);
  j.at("f0").get_to(m.f0);
  j.at("f1").get_to(m.f1);
  j.at("f2").get_to(m.f2);
  j.at("R1").get_to(m.r1);
  j.at("V").get_to(m.v);
  j.at("Vf").get_to(m.vf);
  j.at("eps0").get_to(m.eps0);
}

void to_json(nlohmann::json& j, const PortfolioSolution& s) {
  j = nlohmann::json{{"w_plus", vector_to_json(s.w_plus)},
                     {"w_minus", vector_to_json(s.w_minus)},
                     {"R_plus", s.r_plus},
                     {"R_minus", s.r_minus},
                     {"theta_plus", optional_to_json(s.theta_plus)},
                     {"theta_minus", optional_to_json(s.theta_minus)},
                     {"k_plus", optional_to_json(s.k_plus)},
                     {"k_minus", optional_to_json(s.k_minus)},
                     {"tau", s.tau},
                     {"eps", s.eps}};
}

void from_json(const nlohmann::json& j, PortfolioSolution& s) {
  s.w_plus = vector_from_json(j.at("w_plus"));
  s.w_minus = vector_from_json(j.at("w_minus"));
  j.at("R_plus").get_to(s.r_plus);
  j.at("R_minus").get_to(s.r_minus);
  s.theta_plus = optional_from_json(j.at("theta_plus"));
  s.theta_minus = optional_from_json(j.at("theta_minus"));
  s.k_plus = optional_from_json(j.at("k_plus"));
  s.k_minus = optional_from_json(j.at("k_minus"));
  j.at("tau").get_to(s.tau);
  j.at("eps").get_to(s.eps);
}

void to_json(nlohmann::json& j, const GeometryStats& g) {
  j = nlohmann::json{{"q_w_plus", g.q_w_plus},
                     {"q_w_minus", g.q_w_minus},
                     {"c", g.overlap_c},
                     {"Delta", g.delta},
                     {"rho", g.rho}};
}

void from_json(const nlohmann::json& j, GeometryStats& g) {
  j.at("q_w_plus").get_to(g.q_w_plus);
  j.at("q_w_minus").get_to(g.q_w_minus);
  j.at("c").get_to(g.overlap_c);
  j.at("Delta").get_to(g.delta);
  j.at("rho").get_to(g.rho);
}

void to_json(nlohmann::json& j, const ReplicaPrediction& p) {
  to_json(j, p.moments);
  j["chi_s"] = p.chi_s;
  j["q_s"] = p.q_s;
  j["chi_tilde_s"] = p.chi_tilde_s;
  j["q_tilde_s"] = p.q_tilde_s;
  j["alpha"] = p.alpha;
}

void from_json(const nlohmann::json& j, ReplicaPrediction& p) {
  from_json(j, p.moments);
  j.at("chi_s").get_to(p.chi_s);
  j.at("q_s").get_to(p.q_s);
  j.at("chi_tilde_s").get_to(p.chi_tilde_s);
  j.at("q_tilde_s").get_to(p.q_tilde_s);
  j.at("alpha").get_to(p.alpha);
}

void to_json(nlohmann::json& j, const AssetParameters& p) {
  nlohmann::json assets = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.n_assets(); ++i) {
    assets.push_back({{"r", p.means[i]}, {"v", p.variances[i]}});
  }
  j = nlohmann::json{{"assets", std::move(assets)}};
}

void from_json(const nlohmann::json& j, AssetParameters& p) {
  if (!j.contains("assets") || !j.at("assets").is_array()) {
    throw ConfigError("asset parameters must contain an \"assets\" array");
  }
  const auto& assets = j.at("assets");
  Eigen::VectorXd means(static_cast<Eigen::Index>(assets.size()));
  Eigen::VectorXd variances(static_cast<Eigen::Index>(assets.size()));
  Eigen::Index i = 0;
  for (const auto& asset : assets) {
    means[i] = asset.at("r").get<double>();
    variances[i] = asset.at("v").get<double>();
    ++i;
  }
  p = AssetParameters::make(std::move(means), std::move(variances));
}

void to_json(nlohmann::json& j, const SweepConfig& c) {
  nlohmann::json n_values = nlohmann::json::array();
  for (const Eigen::Index n : c.n_values) n_values.push_back(static_cast<std::int64_t>(n));
  j = nlohmann::json{{"params", c.params},
                     {"n_values", std::move(n_values)},
                     {"alpha_values", c.alpha_values},
                     {"tau_values", c.tau_values},
                     {"trials", c.trials},
                     {"base_seed", c.base_seed},
                     {"family", to_string(c.family)}};
}

void from_json(const nlohmann::json& j, SweepConfig& c) {
  j.at("params").get_to(c.params);
  c.n_values.clear();
  for (const auto& n : j.at("n_values")) {
    c.n_values.push_back(static_cast<Eigen::Index>(n.get<std::int64_t>()));
  }
  j.at("alpha_values").get_to(c.alpha_values);
  if (j.contains("tau_values")) {
    j.at("tau_values").get_to(c.tau_values);
  } else {
    c.tau_values = {1.0};
  }
  j.at("trials").get_to(c.trials);
  j.at("base_seed").get_to(c.base_seed);
  c.family = parse_distribution(j.at("family").get<std::string>());
}

void to_json(nlohmann::json& j, const ConvergenceReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"N", static_cast<std::int64_t>(row.n)},
                    {"alpha", row.alpha},
                    {"quantity", row.quantity},
                    {"replica", row.replica_value},
                    {"mean", row.empirical_mean},
                    {"stderr", row.empirical_stderr},
                    {"rel_error", row.rel_error}});
  }
  j = nlohmann::json{
      {"metadata",
       {{"base_seed", r.metadata.base_seed},
        {"trials", r.metadata.trials},
        {"family", r.metadata.family},
        {"timestamp", r.metadata.timestamp},
        {"skipped_trials", r.metadata.skipped_trials},
        {"total_trials", r.metadata.total_trials},
        {"skip_threshold", r.metadata.skip_threshold},
        {"convergence_tolerance", r.metadata.convergence_tolerance}}},
      {"rows", std::move(rows)}};
}

void from_json(const nlohmann::json& j, ConvergenceReport& r) {
  const auto& meta = j.at("metadata");
  meta.at("base_seed").get_to(r.metadata.base_seed);
  meta.at("trials").get_to(r.metadata.trials);
  meta.at("family").get_to(r.metadata.family);
  meta.at("timestamp").get_to(r.metadata.timestamp);
  meta.at("skipped_trials").get_to(r.metadata.skipped_trials);
  meta.at("total_trials").get_to(r.metadata.total_trials);
  meta.at("skip_threshold").get_to(r.metadata.skip_threshold);
  meta.at("convergence_tolerance").get_to(r.metadata.convergence_tolerance);
  r.rows.clear();
  for (const auto& row_json : j.at("rows")) {
    ConvergenceRow row;
    row.n = static_cast<Eigen::Index>(row_json.at("N").get<std::int64_t>());
    row_json.at("alpha").get_to(row.alpha);
    row_json.at("quantity").get_to(row.quantity);
    row_json.at("replica").get_to(row.replica_value);
    row_json.at("mean").get_to(row.empirical_mean);
    row_json.at("stderr").get_to(row.empirical_stderr);
    row_json.at("rel_error").get_to(row.rel_error);
    r.rows.push_back(std::move(row));
  }
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

AssetParameters load_asset_params(const std::filesystem::path& path) {
  try {
    return load_json_file(path).get<AssetParameters>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid asset parameters in " + path.string() + ": " + e.what());
  }
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  try {
    SweepConfig config = load_json_file(path).get<SweepConfig>();
    config.validate();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid sweep config in " + path.string() + ": " + e.what());
  }
}

void write_returns_csv(const std::filesystem::path& path, const Eigen::MatrixXd& raw) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "# asset,period_1..period_p\n";
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (Eigen::Index u = 0; u < raw.cols(); ++u) {
      if (u > 0) out << ',';
      out << format_double(raw(i, u));
    }
    out << '\n';
  }
}

Eigen::MatrixXd load_returns_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& field : fields) row.push_back(parse_real(field, path));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError("ragged CSV: row " + std::to_string(rows.size() + 1) +
                        " has a different column count in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("no data rows in " + path.string());

  Eigen::MatrixXd raw(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (Eigen::Index u = 0; u < raw.cols(); ++u) {
      raw(i, u) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)];
    }
  }
  return raw;
}

ReturnSample load_return_sample(const std::filesystem::path& path,
                                const AssetParameters& params, MeanConvention convention) {
  Eigen::MatrixXd raw = load_returns_csv(path);
  if (raw.rows() != params.n_assets()) {
    throw ConfigError("return history has " + std::to_string(raw.rows()) +
                      " rows but the parameter file describes " +
                      std::to_string(params.n_assets()) + " assets");
  }
  if (raw.cols() <= raw.rows()) {
    throw RegularityError("return history needs more periods than assets (p > N)");
  }
  return ReturnSample::from_raw(std::move(raw), params.means, convention);
}

void write_frontier_csv(const std::filesystem::path& path, const FrontierCurve& curve) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "# R1=" << format_double(curve.r1) << " V=" << format_double(curve.v)
      << " eps0=" << format_double(curve.eps0) << '\n';
  out << "R,eps\n";
  for (const auto& point : curve.points) {
    out << format_double(point.r) << ',' << format_double(point.eps) << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  const auto& meta = report.metadata;
  out << "# base_seed=" << meta.base_seed << " trials=" << meta.trials
      << " family=" << meta.family << " skipped_trials=" << meta.skipped_trials
      << " total_trials=" << meta.total_trials
      << " skip_threshold=" << format_double(meta.skip_threshold)
      << " convergence_tolerance=" << format_double(meta.convergence_tolerance) << '\n';
  out << "# timestamp=" << meta.timestamp << '\n';
  out << "N,alpha,quantity,replica,mean,stderr,rel_error\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << format_double(row.alpha) << ',' << row.quantity << ','
        << format_double(row.replica_value) << ',' << format_double(row.empirical_mean)
        << ',' << format_double(row.empirical_stderr) << ','
        << format_double(row.rel_error) << '\n';
  }
}

}  // namespace prl

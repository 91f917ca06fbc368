// prl: closed-form budget+risk constrained return extremization, frontier
// emission, asymptotic moment prediction, and Monte Carlo convergence sweeps.
//
// Exit codes: 0 success, 1 validation error, 2 computation error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "prl/closed_form.hpp"
#include "prl/errors.hpp"
#include "prl/experiments.hpp"
#include "prl/io.hpp"
#include "prl/model.hpp"
#include "prl/moments.hpp"
#include "prl/replica.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitComputation = 2;

struct GenerateArgs {
  std::string params_path;
  std::string out_path;
  std::int64_t periods = 0;
  std::uint64_t seed = 0;
  std::string family = "gaussian";
};

struct OptimizeArgs {
  std::string returns_path;
  std::string params_path;
  std::string out_path;
  double tau = 1.0;
  bool verify = false;
  bool sample_means = false;
};

struct FrontierArgs {
  std::string returns_path;
  std::string params_path;
  std::string out_path;
  double r_min = 0.0;
  double r_max = 0.0;
  int points = 0;
  bool sample_means = false;
};

struct ReplicaArgs {
  std::string params_path;
  std::string out_path;
  double alpha = 0.0;
  double k = 0.0;
  double theta = 0.0;
};

struct SweepArgs {
  std::string config_path;
  std::string out_dir;
};

int run_generate(const GenerateArgs& args) {
  const prl::AssetParameters params = prl::load_asset_params(args.params_path);
  const prl::ReturnSample sample =
      prl::generate_returns(params, static_cast<Eigen::Index>(args.periods), args.seed,
                            prl::parse_distribution(args.family));
  prl::write_returns_csv(args.out_path, sample.raw);
  std::cout << "N=" << sample.n_assets() << " p=" << sample.n_periods()
            << " alpha=" << prl::format_double(sample.alpha()) << '\n';
  return kExitOk;
}

int run_optimize(const OptimizeArgs& args) {
  const prl::AssetParameters params = prl::load_asset_params(args.params_path);
  const auto convention = args.sample_means ? prl::MeanConvention::kSampleMeans
                                            : prl::MeanConvention::kTrueMeans;
  const prl::ReturnSample sample =
      prl::load_return_sample(args.returns_path, params, convention);
  const prl::RiskMatrix risk = prl::build_risk_matrix(sample);
  const prl::MomentSolves solves = prl::compute_moment_solves(risk, params.means);
  const prl::PortfolioSolution solution = prl::solve_portfolio(solves, args.tau);
  const prl::GeometryStats from_vectors = prl::geometry_statistics(solution);
  const prl::GeometryStats from_moments =
      prl::closed_form_statistics(solves.moments, args.tau);

  if (args.verify) {
    const auto check = [](const char* name, double a, double b) {
      const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
      if (std::abs(a - b) > 1e-8 * scale) {
        throw prl::InternalError(std::string("vector-path and moment-path ") + name +
                                 " disagree: " + prl::format_double(a) + " vs " +
                                 prl::format_double(b));
      }
    };
    check("q_w_plus", from_vectors.q_w_plus, from_moments.q_w_plus);
    check("q_w_minus", from_vectors.q_w_minus, from_moments.q_w_minus);
    check("c", from_vectors.overlap_c, from_moments.overlap_c);
    check("Delta", from_vectors.delta, from_moments.delta);
    check("rho", from_vectors.rho, from_moments.rho);
  }

  nlohmann::json out;
  out["moments"] = solves.moments;
  out["solution"] = solution;
  out["geometry"] = from_vectors;
  out["geometry_closed_form"] = from_moments;
  prl::write_json_file(args.out_path, out);
  std::cout << "wrote " << args.out_path << '\n';
  return kExitOk;
}

int run_frontier(const FrontierArgs& args) {
  const prl::AssetParameters params = prl::load_asset_params(args.params_path);
  const auto convention = args.sample_means ? prl::MeanConvention::kSampleMeans
                                            : prl::MeanConvention::kTrueMeans;
  const prl::ReturnSample sample =
      prl::load_return_sample(args.returns_path, params, convention);
  const prl::RiskMatrix risk = prl::build_risk_matrix(sample);
  const prl::MomentSet moments = prl::compute_moments(risk, params.means);
  const prl::FrontierCurve curve =
      prl::frontier(moments, args.r_min, args.r_max, args.points);
  prl::write_frontier_csv(args.out_path, curve);
  std::cout << "wrote " << args.out_path << '\n';
  return kExitOk;
}

int run_replica(const ReplicaArgs& args) {
  const prl::AssetParameters params = prl::load_asset_params(args.params_path);
  const prl::ReplicaPrediction prediction =
      prl::predict(params, args.alpha, args.k, args.theta);
  prl::write_json_file(args.out_path, nlohmann::json(prediction));
  std::cout << "wrote " << args.out_path << '\n';
  return kExitOk;
}

int run_sweep(const SweepArgs& args) {
  const prl::SweepConfig config = prl::load_sweep_config(args.config_path);
  const prl::ConvergenceReport report = prl::run_convergence(config);
  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  prl::write_report_csv(dir / "report.csv", report);
  prl::write_json_file(dir / "report.json", nlohmann::json(report));
  std::cout << "wrote " << (dir / "report.csv").string() << " and "
            << (dir / "report.json").string() << " (" << report.rows.size()
            << " rows, " << report.metadata.skipped_trials << " skipped trials)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-form two-constraint portfolio extremization and its Monte Carlo verification"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "draw a synthetic return history CSV");
  generate->add_option("params", gen.params_path, "asset parameter JSON")->required();
  generate->add_option("--periods", gen.periods, "number of observation periods p (> N)")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "64-bit seed");
  generate->add_option("--family", gen.family, "gaussian | uniform | two-point");
  generate->add_option("--out", gen.out_path, "output CSV path")->required();

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "solve both extremal portfolios and their geometry");
  optimize->add_option("returns", opt.returns_path, "return history CSV")->required();
  optimize->add_option("params", opt.params_path, "asset parameter JSON")->required();
  optimize->add_option("--tau", opt.tau, "risk tolerance (>= 1)")->required();
  optimize->add_option("--out", opt.out_path, "output JSON path")->required();
  optimize->add_flag("--verify", opt.verify,
                     "assert vector-path and moment-path geometry agree to 1e-8");
  optimize->add_flag("--sample-means", opt.sample_means,
                     "subtract per-row sample means instead of the true means");

  FrontierArgs fr;
  auto* frontier_cmd = app.add_subcommand("frontier", "emit the risk-return frontier parabola");
  frontier_cmd->add_option("returns", fr.returns_path, "return history CSV")->required();
  frontier_cmd->add_option("params", fr.params_path, "asset parameter JSON")->required();
  frontier_cmd->add_option("--rmin", fr.r_min, "lowest return to sample")->required();
  frontier_cmd->add_option("--rmax", fr.r_max, "highest return to sample")->required();
  frontier_cmd->add_option("--points", fr.points, "number of samples (>= 2)")->required();
  frontier_cmd->add_option("--out", fr.out_path, "output CSV path")->required();
  frontier_cmd->add_flag("--sample-means", fr.sample_means,
                         "subtract per-row sample means instead of the true means");

  ReplicaArgs rep;
  auto* replica_cmd = app.add_subcommand("replica", "asymptotic moment prediction at ratio alpha");
  replica_cmd->add_option("params", rep.params_path, "asset parameter JSON")->required();
  replica_cmd->add_option("--alpha", rep.alpha, "periods-to-assets ratio (> 1)")->required();
  replica_cmd->add_option("--k", rep.k, "budget source term for the order parameters");
  replica_cmd->add_option("--theta", rep.theta, "risk source term for the order parameters");
  replica_cmd->add_option("--out", rep.out_path, "output JSON path")->required();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo convergence study vs the asymptotic values");
  sweep->add_option("config", sw.config_path, "sweep config JSON")->required();
  sweep->add_option("--out", sw.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*optimize) return run_optimize(opt);
    if (*frontier_cmd) return run_frontier(fr);
    if (*replica_cmd) return run_replica(rep);
    if (*sweep) return run_sweep(sw);
    std::cerr << "no subcommand selected\n";
    return kExitValidation;
  } catch (const prl::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const prl::RegularityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const prl::InfeasibleRiskError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const prl::AsymptoticRegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const prl::Error& e) {
    // singular matrix, degenerate returns, oracle divergence, internal
    std::cerr << "computation failed: " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << '\n';
    return kExitComputation;
  }
}

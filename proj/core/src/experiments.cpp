#include "prl/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>

#include "prl/errors.hpp"
#include "prl/replica.hpp"
#include "prl/rng.hpp"

namespace prl {

namespace {

constexpr std::array<std::pair<const char*, double MomentSet::*>, 8> kQuantities{{
    {"g0", &MomentSet::g0},
    {"g1", &MomentSet::g1},
    {"g2", &MomentSet::g2},
    {"f0", &MomentSet::f0},
    {"f1", &MomentSet::f1},
    {"f2", &MomentSet::f2},
    {"R1", &MomentSet::r1},
    {"V", &MomentSet::v},
}};

int hardware_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int resolve_thread_cap(int requested) {
  if (requested <= 0) return hardware_threads();
  return std::min(requested, hardware_threads());
}

int threads_from_env() {
  const char* env = std::getenv("PRL_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || value < 0) {
    throw ConfigError("PRL_THREADS must be a nonnegative integer");
  }
  return static_cast<int>(value);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[24];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Minimum-risk anchor of the feasible set, solved with LDLT so the oracle and
// sampler share no factorization route with the closed-form path.
struct FeasibleGeometry {
  Eigen::VectorXd w_min_risk;  // J^-1 e scaled to budget N
  double eps0 = 0;             // minimal risk per asset
};

FeasibleGeometry feasible_geometry(const RiskMatrix& risk) {
  const Eigen::Index n = risk.n_assets();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(risk.j);
  if (ldlt.info() != Eigen::Success) {
    throw SingularMatrixError("risk matrix factorization failed");
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd y = ldlt.solve(ones);
  const double ete = ones.dot(y);  // N g0
  if (!(ete > 0.0) || !std::isfinite(ete)) {
    throw SingularMatrixError("risk matrix is numerically singular");
  }
  FeasibleGeometry geom;
  geom.w_min_risk = (static_cast<double>(n) / ete) * y;
  geom.eps0 = static_cast<double>(n) / (2.0 * ete);
  return geom;
}

}  // namespace

void SweepConfig::validate() const {
  if (params.means.size() != params.variances.size() || params.n_assets() < 2) {
    throw ConfigError("sweep params need matching means/variances with at least two assets");
  }
  for (Eigen::Index i = 0; i < params.n_assets(); ++i) {
    if (!(params.variances[i] > 0.0)) {
      throw ConfigError("sweep params require strictly positive variances");
    }
  }
  if (n_values.empty()) throw ConfigError("n_values must be nonempty");
  for (const Eigen::Index n : n_values) {
    if (n < 2) throw ConfigError("every N must be at least 2");
  }
  if (alpha_values.empty()) throw ConfigError("alpha_values must be nonempty");
  for (const double a : alpha_values) {
    if (!(a > 1.0)) throw ConfigError("every alpha must exceed 1");
  }
  for (const double t : tau_values) {
    if (!(t >= 1.0)) throw ConfigError("every tau must be at least 1");
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
}

CellResult run_cell(const AssetParameters& pattern, Eigen::Index n, double alpha,
                    int trials, std::uint64_t base_seed, std::uint64_t n_index,
                    std::uint64_t alpha_index, ReturnDistribution family,
                    int max_threads) {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(alpha > 1.0)) throw ConfigError("alpha must exceed 1");
  const AssetParameters params = pattern.tiled(n);
  const auto p = static_cast<Eigen::Index>(std::llround(alpha * static_cast<double>(n)));
  if (p <= n) {
    throw ConfigError("alpha too close to 1: p = round(alpha N) does not exceed N");
  }

  std::vector<std::optional<MomentSet>> slots(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::atomic<int> skipped{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        const std::uint64_t seed = derive_seed(base_seed, n_index, alpha_index,
                                               static_cast<std::uint64_t>(t));
        const ReturnSample sample = generate_returns(params, p, seed, family);
        const RiskMatrix risk = build_risk_matrix(sample);
        slots[static_cast<std::size_t>(t)] = compute_moments(risk, params.means);
      } catch (const SingularMatrixError&) {
        skipped.fetch_add(1);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::min(resolve_thread_cap(max_threads), trials);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  CellResult cell;
  cell.n_periods = p;
  cell.alpha = static_cast<double>(p) / static_cast<double>(n);
  cell.skipped = skipped.load();
  cell.trials.reserve(slots.size());
  for (const auto& slot : slots) {
    if (slot) cell.trials.push_back(*slot);
  }
  return cell;
}

ConvergenceReport run_convergence(const SweepConfig& config) {
  config.validate();
  const int thread_cap = threads_from_env();

  ConvergenceReport report;
  report.metadata.base_seed = config.base_seed;
  report.metadata.trials = config.trials;
  report.metadata.family = to_string(config.family);
  report.metadata.skip_threshold = 0.05;
  report.metadata.convergence_tolerance = 0.05;

  int total_trials = 0;
  int skipped_trials = 0;
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const Eigen::Index n = config.n_values[ni];
    for (std::size_t ai = 0; ai < config.alpha_values.size(); ++ai) {
      const CellResult cell =
          run_cell(config.params, n, config.alpha_values[ai], config.trials,
                   config.base_seed, ni, ai, config.family, thread_cap);
      total_trials += config.trials;
      skipped_trials += cell.skipped;
      if (cell.trials.empty()) continue;  // the skip gate below reports this

      const AssetParameters tiled = config.params.tiled(n);
      const MomentSet predicted = replica_moments(quenched_averages(tiled), cell.alpha);
      const double kept = static_cast<double>(cell.trials.size());
      for (const auto& [name, member] : kQuantities) {
        double mean = 0.0;
        for (const MomentSet& m : cell.trials) mean += m.*member;
        mean /= kept;
        double sq = 0.0;
        for (const MomentSet& m : cell.trials) {
          const double d = m.*member - mean;
          sq += d * d;
        }
        const double stderr_ = kept > 1.0 ? std::sqrt(sq / (kept - 1.0) / kept) : 0.0;
        const double ref = predicted.*member;
        ConvergenceRow row;
        row.n = n;
        row.alpha = cell.alpha;
        row.quantity = name;
        row.replica_value = ref;
        row.empirical_mean = mean;
        row.empirical_stderr = stderr_;
        row.rel_error = ref != 0.0 ? std::abs(mean - ref) / std::abs(ref)
                                   : std::abs(mean - ref);
        report.rows.push_back(std::move(row));
      }
    }
  }

  report.metadata.total_trials = total_trials;
  report.metadata.skipped_trials = skipped_trials;
  report.metadata.timestamp = utc_timestamp();

  std::sort(report.rows.begin(), report.rows.end(),
            [](const ConvergenceRow& a, const ConvergenceRow& b) {
              return std::tie(a.n, a.alpha, a.quantity) < std::tie(b.n, b.alpha, b.quantity);
            });

  if (skipped_trials > report.metadata.skip_threshold * total_trials) {
    throw SingularMatrixError("more than 5% of trials produced singular samples");
  }
  return report;
}

OracleResult numeric_max_return_oracle(const RiskMatrix& risk,
                                       const Eigen::VectorXd& means, double tau) {
  const Eigen::Index n = risk.n_assets();
  if (means.size() != n) {
    throw ConfigError("means length does not match the risk matrix dimension");
  }
  if (!(tau > 1.0)) {
    throw InfeasibleRiskError("the stationarity oracle requires tau > 1");
  }

  const FeasibleGeometry geom = feasible_geometry(risk);
  const double n_real = static_cast<double>(n);
  const double risk_budget = n_real * tau * geom.eps0;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  // return gradient projected into the budget hyperplane
  const Eigen::VectorXd direction = means - (means.sum() / n_real) * ones;
  if (!(direction.norm() > 0.0)) {
    throw DegenerateReturnsError("expected returns proportional to ones; no return direction");
  }

  constexpr int kMaxIterations = 200;
  constexpr double kResidualTolerance = 1e-10;

  const auto attempt = [&](double sign) -> std::optional<OracleResult> {
    const Eigen::VectorXd d = sign * direction;
    const double quad = d.dot(risk.j * d);
    if (!(quad > 0.0)) {
      throw InternalError("feasible start scaling failed on a positive definite matrix");
    }
    // along w0 + t d the budget is exact and the risk grows as t^2 quad / 2
    const double t = std::sqrt(2.0 * (risk_budget - n_real * geom.eps0) / quad);
    Eigen::VectorXd w = geom.w_min_risk + t * d;

    // initial multipliers: least squares fit of r + k e = theta J w
    Eigen::MatrixXd basis(n, 2);
    basis.col(0) = ones;
    basis.col(1) = -(risk.j * w);
    const Eigen::Vector2d multipliers = basis.colPivHouseholderQr().solve(-means);
    double k = multipliers[0];
    double theta = multipliers[1];

    const auto residual_of = [&](const Eigen::VectorXd& w_, double k_, double theta_) {
      Eigen::VectorXd res(n + 2);
      res.head(n) = means + k_ * ones - theta_ * (risk.j * w_);
      res[n] = ones.dot(w_) - n_real;
      res[n + 1] = risk_budget - 0.5 * w_.dot(risk.j * w_);
      return res;
    };

    Eigen::VectorXd residual = residual_of(w, k, theta);
    double norm = residual.lpNorm<Eigen::Infinity>();
    for (int iter = 0; iter < kMaxIterations && norm >= kResidualTolerance; ++iter) {
      const Eigen::VectorXd jw = risk.j * w;
      Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 2, n + 2);
      jac.topLeftCorner(n, n) = -theta * risk.j;
      jac.col(n).head(n) = ones;
      jac.col(n + 1).head(n) = -jw;
      jac.row(n).head(n) = ones.transpose();
      jac.row(n + 1).head(n) = -jw.transpose();
      const Eigen::VectorXd step = jac.partialPivLu().solve(-residual);

      double lambda = 1.0;
      bool accepted = false;
      for (int halving = 0; halving < 60; ++halving) {
        const Eigen::VectorXd w_trial = w + lambda * step.head(n);
        const double k_trial = k + lambda * step[n];
        const double theta_trial = theta + lambda * step[n + 1];
        const Eigen::VectorXd res_trial = residual_of(w_trial, k_trial, theta_trial);
        const double norm_trial = res_trial.lpNorm<Eigen::Infinity>();
        if (norm_trial < norm) {
          w = w_trial;
          k = k_trial;
          theta = theta_trial;
          residual = res_trial;
          norm = norm_trial;
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) break;  // stalled; report divergence for this start
    }
    if (!(norm < kResidualTolerance)) return std::nullopt;
    return OracleResult{w, means.dot(w) / n_real};
  };

  std::optional<OracleResult> best;
  for (const double sign : {1.0, -1.0}) {
    const auto candidate = attempt(sign);
    if (candidate && (!best || candidate->r_per_asset > best->r_per_asset)) {
      best = candidate;
    }
  }
  if (!best) {
    throw OracleDivergenceError("Newton iteration did not reach the residual tolerance");
  }
  return *best;
}

std::vector<Eigen::VectorXd> feasible_sampler(const RiskMatrix& risk,
                                              const Eigen::VectorXd& means, double tau,
                                              std::size_t count, std::uint64_t seed) {
  const Eigen::Index n = risk.n_assets();
  if (means.size() != n) {
    throw ConfigError("means length does not match the risk matrix dimension");
  }
  if (!(tau >= 1.0)) {
    throw InfeasibleRiskError("feasible set is empty below the minimal risk (tau < 1)");
  }

  const FeasibleGeometry geom = feasible_geometry(risk);
  const double n_real = static_cast<double>(n);
  const double excess_risk = n_real * (tau - 1.0) * geom.eps0;

  std::vector<Eigen::VectorXd> samples;
  samples.reserve(count);
  SplitMix64 rng(seed);
  for (std::size_t s = 0; s < count; ++s) {
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g[i] = rng.normal();
    const Eigen::VectorXd d = g - (g.sum() / n_real) * Eigen::VectorXd::Ones(n);
    const double quad = d.dot(risk.j * d);
    if (!(quad > 0.0) || !std::isfinite(quad)) {
      throw InternalError("budget-hyperplane direction could not be scaled to the risk shell");
    }
    // risk along w0 + t d is N eps0 + t^2 quad / 2; pick t to land on the shell
    const double t = std::sqrt(2.0 * excess_risk / quad);
    samples.push_back(geom.w_min_risk + t * d);
  }
  return samples;
}

}  // namespace prl

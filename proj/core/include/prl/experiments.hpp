#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "prl/model.hpp"
#include "prl/moments.hpp"

namespace prl {

/// Monte Carlo sweep description. The asset pattern is tiled cyclically to
/// each requested N.
struct SweepConfig {
  AssetParameters params;            // base (r, v) pattern
  std::vector<Eigen::Index> n_values;
  std::vector<double> alpha_values;  // all > 1
  std::vector<double> tau_values;    // all >= 1
  int trials = 1;
  std::uint64_t base_seed = 0;
  ReturnDistribution family = ReturnDistribution::kGaussian;

  /// Throws ConfigError on any violated bound.
  void validate() const;
};

struct ConvergenceRow {
  Eigen::Index n = 0;
  double alpha = 0;              // realized p/N
  std::string quantity;          // one of g0,g1,g2,f0,f1,f2,R1,V
  double replica_value = 0;
  double empirical_mean = 0;
  double empirical_stderr = 0;
  double rel_error = 0;          // |mean - replica| / |replica|
};

struct ConvergenceMetadata {
  std::uint64_t base_seed = 0;
  int trials = 0;
  std::string family;
  std::string timestamp;          // ISO 8601 UTC; the only nondeterministic field
  int skipped_trials = 0;         // singular-sample trials, counted and skipped
  int total_trials = 0;
  double skip_threshold = 0.05;   // run fails above this skip fraction
  double convergence_tolerance = 0.05;
};

/// Rows sorted by (N, alpha, quantity): deterministic regardless of how
/// trials were scheduled.
struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  ConvergenceMetadata metadata;
};

/// Per-trial empirical moment sets for one (N, alpha) grid cell. Trial t uses
/// sub-seed derive_seed(base_seed, n_index, alpha_index, t); trials may run
/// concurrently (capped by max_threads; 0 means all cores) and are aggregated
/// in index order afterwards.
struct CellResult {
  std::vector<MomentSet> trials;  // kept trials, in trial-index order
  int skipped = 0;                // singular-sample trials
  Eigen::Index n_periods = 0;
  double alpha = 0;               // realized p/N
};

CellResult run_cell(const AssetParameters& pattern, Eigen::Index n, double alpha,
                    int trials, std::uint64_t base_seed, std::uint64_t n_index,
                    std::uint64_t alpha_index, ReturnDistribution family,
                    int max_threads = 0);

/// Full sweep: empirical moment statistics against the asymptotic predictions
/// for every (N, alpha) cell. Thread cap from the PRL_THREADS environment
/// variable (0 or absent = all cores). Throws SingularMatrixError when more
/// than 5% of all trials had to be skipped.
ConvergenceReport run_convergence(const SweepConfig& config);

struct OracleResult {
  Eigen::VectorXd w;
  double r_per_asset = 0;
};

/// Independent check of the closed forms: solves the stationarity system
///   r + k e = theta J w,  e'w = N,  w'Jw/2 = N eps
/// by damped Newton from feasible starts on both return branches and returns
/// the higher-return stationary point. Shares no code with the closed-form
/// path (different factorizations, no moment reuse).
///
/// Throws OracleDivergenceError if no start converges within 200 iterations
/// to residual inf-norm < 1e-10.
OracleResult numeric_max_return_oracle(const RiskMatrix& risk,
                                       const Eigen::VectorXd& means, double tau);

/// Uniform-direction samples of the feasible set {e'w = N, w'Jw/2 = N eps}:
/// random directions in the budget hyperplane, scaled from the minimum-risk
/// point out to the risk ellipsoid. Every returned vector satisfies both
/// constraints to rounding. count = 0 yields an empty list.
std::vector<Eigen::VectorXd> feasible_sampler(const RiskMatrix& risk,
                                              const Eigen::VectorXd& means, double tau,
                                              std::size_t count, std::uint64_t seed);

}  // namespace prl

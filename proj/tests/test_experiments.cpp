#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "prl/closed_form.hpp"
#include "prl/errors.hpp"
#include "prl/experiments.hpp"
#include "prl/replica.hpp"
#include "test_support.hpp"

using namespace prl;
using prl_test::rel_close;

namespace {

SweepConfig small_config() {
  SweepConfig config;
  config.params = AssetParameters::make(Eigen::Vector2d(1, 3), Eigen::Vector2d(1, 1));
  config.n_values = {20};
  config.alpha_values = {2.0};
  config.tau_values = {1.0};
  config.trials = 4;
  config.base_seed = 99;
  config.family = ReturnDistribution::kGaussian;
  return config;
}

bool reports_equal_modulo_timestamp(const ConvergenceReport& a, const ConvergenceReport& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.n != y.n || x.alpha != y.alpha || x.quantity != y.quantity) return false;
    if (x.replica_value != y.replica_value || x.empirical_mean != y.empirical_mean ||
        x.empirical_stderr != y.empirical_stderr || x.rel_error != y.rel_error) {
      return false;
    }
  }
  return a.metadata.base_seed == b.metadata.base_seed &&
         a.metadata.skipped_trials == b.metadata.skipped_trials &&
         a.metadata.total_trials == b.metadata.total_trials;
}

}  // namespace

TEST_CASE("sweep config validation") {
  auto config = small_config();
  CHECK_NOTHROW(config.validate());

  auto bad_alpha = config;
  bad_alpha.alpha_values = {1.0};
  CHECK_THROWS_AS(bad_alpha.validate(), ConfigError);

  auto bad_tau = config;
  bad_tau.tau_values = {0.5};
  CHECK_THROWS_AS(bad_tau.validate(), ConfigError);

  auto bad_trials = config;
  bad_trials.trials = 0;
  CHECK_THROWS_AS(bad_trials.validate(), ConfigError);

  auto bad_n = config;
  bad_n.n_values = {};
  CHECK_THROWS_AS(bad_n.validate(), ConfigError);
}

TEST_CASE("convergence report is deterministic and ordered") {
  auto config = small_config();
  config.n_values = {30, 20};
  config.alpha_values = {3.0, 2.0};
  const auto a = run_convergence(config);
  const auto b = run_convergence(config);
  CHECK(reports_equal_modulo_timestamp(a, b));

  // 2 N x 2 alpha x 8 quantities
  CHECK(a.rows.size() == 32);
  for (std::size_t i = 1; i < a.rows.size(); ++i) {
    const auto& prev = a.rows[i - 1];
    const auto& cur = a.rows[i];
    const bool ordered = prev.n < cur.n || (prev.n == cur.n && prev.alpha < cur.alpha) ||
                         (prev.n == cur.n && prev.alpha == cur.alpha &&
                          prev.quantity < cur.quantity);
    CHECK(ordered);
  }
  for (const auto& row : a.rows) CHECK(row.empirical_stderr >= 0.0);
  CHECK(a.metadata.total_trials == 16);
  CHECK(a.metadata.skipped_trials == 0);
  CHECK_FALSE(a.metadata.timestamp.empty());
}

TEST_CASE("distinct trials draw distinct samples") {
  const auto pattern = AssetParameters::make(Eigen::Vector2d(1, 3), Eigen::Vector2d(1, 1));
  const auto cell = run_cell(pattern, 20, 2.0, 3, 7, 0, 0, ReturnDistribution::kGaussian);
  REQUIRE(cell.trials.size() == 3);
  CHECK(cell.trials[0].g0 != cell.trials[1].g0);
  CHECK(cell.trials[1].g0 != cell.trials[2].g0);
  CHECK(cell.alpha == 2.0);
  CHECK(cell.n_periods == 40);

  // same seed and indices reproduce the cell
  const auto again = run_cell(pattern, 20, 2.0, 3, 7, 0, 0, ReturnDistribution::kGaussian);
  CHECK(again.trials[2].f2 == cell.trials[2].f2);
}

TEST_CASE("empirical means approach the asymptotic values") {
  auto config = small_config();
  config.n_values = {200};
  config.trials = 10;
  const auto report = run_convergence(config);
  for (const auto& row : report.rows) {
    if (row.quantity == "g0" || row.quantity == "R1") {
      CHECK(row.rel_error < 0.05);
    }
  }
}

TEST_CASE("excessive singular skips fail the run") {
  // two-point rows at N=2 collide often, so many samples are rank deficient
  SweepConfig config;
  config.params = AssetParameters::make(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  config.n_values = {2};
  config.alpha_values = {1.6};
  config.tau_values = {1.0};
  config.trials = 64;
  config.base_seed = 5;
  config.family = ReturnDistribution::kTwoPoint;
  CHECK_THROWS_AS(run_convergence(config), SingularMatrixError);
}

TEST_CASE("stationarity oracle on the hand-worked instance") {
  const auto inst = prl_test::identity_instance();
  const auto result = numeric_max_return_oracle(inst.risk, inst.params.means, 2.0);
  CHECK(result.r_per_asset == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(result.w[0] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(result.w[1] == doctest::Approx(2.0).epsilon(1e-9));

  CHECK_THROWS_AS(numeric_max_return_oracle(inst.risk, inst.params.means, 0.9),
                  InfeasibleRiskError);
}

TEST_CASE("stationarity oracle near the frontier vertex") {
  const auto inst = prl_test::identity_instance();
  const double tau = 1.0 + 1e-6;
  const auto result = numeric_max_return_oracle(inst.risk, inst.params.means, tau);
  // V = 1 here; continuity pins R to within 1e-3 sqrt(V) of R1 = 2
  CHECK(std::abs(result.r_per_asset - 2.0) <= 1.001e-3);
}

TEST_CASE("oracle agrees with the closed form on a random instance") {
  const auto inst = prl_test::random_instance(10, 3.0, 1);
  const auto sol = solve_portfolio(inst.risk, inst.params.means, 2.0);
  const auto oracle = numeric_max_return_oracle(inst.risk, inst.params.means, 2.0);
  CHECK(rel_close(oracle.r_per_asset, sol.r_plus, 1e-6));
  // the oracle portfolio satisfies the constraints it was solved under
  const double n = static_cast<double>(inst.risk.n_assets());
  CHECK(std::abs(oracle.w.sum() - n) / n < 1e-9);
}

TEST_CASE("feasible sampler contract") {
  const auto inst = prl_test::identity_instance();
  CHECK(feasible_sampler(inst.risk, inst.params.means, 2.0, 0, 1).empty());

  const auto samples = feasible_sampler(inst.risk, inst.params.means, 2.0, 1000, 11);
  REQUIRE(samples.size() == 1000);
  const auto solves = compute_moment_solves(inst.risk, inst.params.means);
  const double eps = 2.0 * solves.moments.eps0;
  for (const auto& w : samples) {
    CHECK(std::abs(w.sum() - 2.0) / 2.0 < 1e-8);
    CHECK(std::abs(0.5 * w.dot(inst.risk.j * w) - 2.0 * eps) / (2.0 * eps) < 1e-8);
    const double ret = inst.params.means.dot(w) / 2.0;
    CHECK(ret >= 1.0 - 1e-6);
    CHECK(ret <= 3.0 + 1e-6);
  }

  CHECK_THROWS_AS(feasible_sampler(inst.risk, inst.params.means, 0.5, 1, 1),
                  InfeasibleRiskError);
}

TEST_CASE("sampled returns stay inside the oracle envelope") {
  const auto inst = prl_test::random_instance(10, 3.0, 77);
  const auto sol = solve_portfolio(inst.risk, inst.params.means, 2.0);
  const auto samples = feasible_sampler(inst.risk, inst.params.means, 2.0, 2000, 13);
  const double n = static_cast<double>(inst.risk.n_assets());
  const double margin = 1e-6 * std::max({1.0, std::abs(sol.r_plus), std::abs(sol.r_minus)});
  for (const auto& w : samples) {
    const double ret = inst.params.means.dot(w) / n;
    CHECK(ret <= sol.r_plus + margin);
    CHECK(ret >= sol.r_minus - margin);
  }
}

TEST_CASE("median relative errors shrink as N grows") {
  const auto pattern = AssetParameters::make(Eigen::Vector2d(1, 3), Eigen::Vector2d(1, 1));
  const Eigen::Index n_values[] = {50, 100, 200, 400};
  constexpr double MomentSet::*members[6] = {&MomentSet::g0, &MomentSet::g1, &MomentSet::g2,
                                             &MomentSet::f0, &MomentSet::f1, &MomentSet::f2};
  double medians[4][6];
  for (int ni = 0; ni < 4; ++ni) {
    const auto cell = run_cell(pattern, n_values[ni], 2.0, 50, 246810,
                               static_cast<std::uint64_t>(ni), 0,
                               ReturnDistribution::kGaussian);
    const auto predicted =
        replica_moments(quenched_averages(pattern.tiled(n_values[ni])), cell.alpha);
    for (int q = 0; q < 6; ++q) {
      std::vector<double> errs;
      for (const auto& m : cell.trials) {
        errs.push_back(std::abs(m.*members[q] - predicted.*members[q]) /
                       std::abs(predicted.*members[q]));
      }
      std::sort(errs.begin(), errs.end());
      medians[ni][q] = 0.5 * (errs[errs.size() / 2 - 1] + errs[errs.size() / 2]);
    }
  }
  // monotone decrease in N, allowing one finite-size inversion, for at
  // least 5 of the 6 moments
  int monotone = 0;
  for (int q = 0; q < 6; ++q) {
    int inversions = 0;
    for (int ni = 1; ni < 4; ++ni) {
      if (medians[ni][q] > medians[ni - 1][q]) ++inversions;
    }
    if (inversions <= 1) ++monotone;
  }
  CHECK(monotone >= 5);
}

TEST_CASE("distribution families give convergence of the same order") {
  const auto pattern = AssetParameters::make(Eigen::Vector2d(1, 3), Eigen::Vector2d(1, 1));
  double errs[3] = {0, 0, 0};
  int idx = 0;
  for (const auto family : {ReturnDistribution::kGaussian, ReturnDistribution::kUniform,
                            ReturnDistribution::kTwoPoint}) {
    const auto cell = run_cell(pattern, 200, 2.0, 20, 4321, 0, 0, family);
    const auto predicted = replica_moments(quenched_averages(pattern.tiled(200)), cell.alpha);
    double mean_g0 = 0.0;
    for (const auto& m : cell.trials) mean_g0 += m.g0;
    mean_g0 /= static_cast<double>(cell.trials.size());
    errs[idx++] = std::abs(mean_g0 - predicted.g0) / predicted.g0;
  }
  const double lo = std::min({errs[0], errs[1], errs[2]});
  const double hi = std::max({errs[0], errs[1], errs[2]});
  CHECK(hi / lo < 3.0);
  CHECK(hi < 0.05);
}

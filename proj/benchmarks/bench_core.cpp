#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "prl/closed_form.hpp"
#include "prl/experiments.hpp"
#include "prl/model.hpp"
#include "prl/moments.hpp"
#include "prl/replica.hpp"
#include "prl/rng.hpp"

namespace {

prl::AssetParameters make_params(Eigen::Index n) {
  prl::SplitMix64 rng(17);
  Eigen::VectorXd means(n);
  Eigen::VectorXd variances(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    means[i] = -1.0 + 3.0 * rng.uniform01();
    variances[i] = 0.5 + 1.5 * rng.uniform01();
  }
  return prl::AssetParameters::make(means, variances);
}

void BM_GenerateReturns(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto params = make_params(n);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto sample = prl::generate_returns(params, 2 * n, seed++, prl::ReturnDistribution::kGaussian);
    benchmark::DoNotOptimize(sample.modified.data());
  }
  state.SetItemsProcessed(state.iterations() * n * 2 * n);
}
BENCHMARK(BM_GenerateReturns)->Arg(64)->Arg(256)->Arg(512);

void BM_BuildRiskMatrix(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto params = make_params(n);
  const auto sample = prl::generate_returns(params, 2 * n, 1, prl::ReturnDistribution::kGaussian);
  for (auto _ : state) {
    auto risk = prl::build_risk_matrix(sample);
    benchmark::DoNotOptimize(risk.j.data());
  }
}
BENCHMARK(BM_BuildRiskMatrix)->Arg(64)->Arg(256)->Arg(512);

void BM_ComputeMoments(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto params = make_params(n);
  const auto risk = prl::build_risk_matrix(
      prl::generate_returns(params, 2 * n, 1, prl::ReturnDistribution::kGaussian));
  for (auto _ : state) {
    auto moments = prl::compute_moments(risk, params.means);
    benchmark::DoNotOptimize(moments);
  }
}
BENCHMARK(BM_ComputeMoments)->Arg(64)->Arg(256)->Arg(512);

void BM_SolvePortfolio(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto params = make_params(n);
  const auto risk = prl::build_risk_matrix(
      prl::generate_returns(params, 2 * n, 1, prl::ReturnDistribution::kGaussian));
  const auto solves = prl::compute_moment_solves(risk, params.means);
  for (auto _ : state) {
    auto solution = prl::solve_portfolio(solves, 2.0);
    benchmark::DoNotOptimize(solution.w_plus.data());
  }
}
BENCHMARK(BM_SolvePortfolio)->Arg(64)->Arg(256)->Arg(512);

void BM_KktOracle(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto params = make_params(n);
  const auto risk = prl::build_risk_matrix(
      prl::generate_returns(params, 3 * n, 1, prl::ReturnDistribution::kGaussian));
  for (auto _ : state) {
    auto result = prl::numeric_max_return_oracle(risk, params.means, 2.0);
    benchmark::DoNotOptimize(result.w.data());
  }
}
BENCHMARK(BM_KktOracle)->Arg(16)->Arg(64);

void BM_ReplicaMoments(benchmark::State& state) {
  const auto params = make_params(static_cast<Eigen::Index>(state.range(0)));
  const auto avgs = prl::quenched_averages(params);
  for (auto _ : state) {
    auto moments = prl::replica_moments(avgs, 2.0);
    benchmark::DoNotOptimize(moments);
  }
}
BENCHMARK(BM_ReplicaMoments)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();

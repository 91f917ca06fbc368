#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>

#include "prl/errors.hpp"
#include "prl/model.hpp"
#include "prl/moments.hpp"
#include "prl/rng.hpp"
#include "test_support.hpp"

using namespace prl;
using prl_test::rel_close;

namespace {

AssetParameters two_asset(double r0, double r1, double v0, double v1) {
  Eigen::Vector2d r(r0, r1);
  Eigen::Vector2d v(v0, v1);
  return AssetParameters::make(r, v);
}

bool bitwise_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("asset parameter validation") {
  CHECK_THROWS_AS(AssetParameters::make(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)),
                  ConfigError);
  CHECK_THROWS_AS(AssetParameters::make(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(2)),
                  ConfigError);
  Eigen::Vector2d bad_v(1.0, 0.0);
  CHECK_THROWS_AS(AssetParameters::make(Eigen::Vector2d(1.0, 2.0), bad_v), ConfigError);
  CHECK_NOTHROW(two_asset(0.0, 0.0, 1.0, 1.0));
}

TEST_CASE("distribution tags") {
  CHECK(parse_distribution("gaussian") == ReturnDistribution::kGaussian);
  CHECK(parse_distribution("uniform") == ReturnDistribution::kUniform);
  CHECK(parse_distribution("two-point") == ReturnDistribution::kTwoPoint);
  CHECK_THROWS_AS(parse_distribution("cauchy"), ConfigError);
  CHECK(to_string(ReturnDistribution::kTwoPoint) == "two-point");
}

TEST_CASE("generate_returns is deterministic") {
  const auto params = two_asset(0.0, 0.0, 1.0, 1.0);
  const auto a = generate_returns(params, 4, 42, ReturnDistribution::kGaussian);
  const auto b = generate_returns(params, 4, 42, ReturnDistribution::kGaussian);
  CHECK(a.raw.rows() == 2);
  CHECK(a.raw.cols() == 4);
  CHECK(bitwise_equal(a.raw, b.raw));
  CHECK(bitwise_equal(a.modified, b.modified));

  const auto c = generate_returns(params, 4, 43, ReturnDistribution::kGaussian);
  CHECK_FALSE(bitwise_equal(a.raw, c.raw));
}

TEST_CASE("generate_returns rejects p <= N") {
  const auto params = AssetParameters::make(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 1, 1));
  CHECK_THROWS_AS(generate_returns(params, 3, 1, ReturnDistribution::kGaussian),
                  RegularityError);
  CHECK_THROWS_AS(generate_returns(params, 2, 1, ReturnDistribution::kGaussian),
                  RegularityError);
  CHECK_NOTHROW(generate_returns(params, 4, 1, ReturnDistribution::kGaussian));
}

TEST_CASE("modified table is the exact subtraction of the true means") {
  const auto params = two_asset(1.0, 3.0, 2.0, 0.5);
  const auto sample = generate_returns(params, 16, 9, ReturnDistribution::kUniform);
  for (Eigen::Index i = 0; i < sample.n_assets(); ++i) {
    for (Eigen::Index u = 0; u < sample.n_periods(); ++u) {
      CHECK(sample.modified(i, u) == sample.raw(i, u) - params.means[i]);
    }
  }
  CHECK(sample.alpha() == 8.0);
}

TEST_CASE("sample-mean convention centers each row") {
  Eigen::MatrixXd raw(2, 4);
  raw << 1, 2, 3, 4,
         0, 0, 8, 0;
  const Eigen::Vector2d means(0.0, 0.0);
  const auto sample = ReturnSample::from_raw(raw, means, MeanConvention::kSampleMeans);
  CHECK(sample.modified.row(0).sum() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sample.modified(1, 2) == doctest::Approx(6.0));
}

TEST_CASE("per-row mean and variance land on the requested targets") {
  // 4-sigma window on the mean and a 10% window on the variance, for
  // 20 derived seeds; the base seed is frozen so this is deterministic.
  const auto params = two_asset(1.0, 1.0, 4.0, 4.0);
  const Eigen::Index p = 10000;
  const double mean_tol = 4.0 * std::sqrt(4.0 / static_cast<double>(p));  // 0.08
  CHECK(mean_tol == doctest::Approx(0.08));

  for (const auto family : {ReturnDistribution::kGaussian, ReturnDistribution::kUniform,
                            ReturnDistribution::kTwoPoint}) {
    const int n_seeds = family == ReturnDistribution::kGaussian ? 20 : 5;
    for (int s = 0; s < n_seeds; ++s) {
      const auto sample = generate_returns(params, p, derive_seed(7, s), family);
      for (Eigen::Index i = 0; i < 2; ++i) {
        const double mean = sample.raw.row(i).mean();
        CHECK(std::abs(mean - 1.0) < mean_tol);
        const double var =
            (sample.raw.row(i).array() - mean).square().sum() / static_cast<double>(p - 1);
        CHECK(std::abs(var - 4.0) < 0.10 * 4.0);
      }
    }
  }
}

TEST_CASE("risk matrix matches the defining sum") {
  Eigen::MatrixXd modified(2, 2);
  modified << 1, 0,
              0, 1;
  ReturnSample sample;
  sample.raw = modified;
  sample.modified = modified;
  const auto risk = build_risk_matrix(sample);
  CHECK(risk.j(0, 0) == 0.5);
  CHECK(risk.j(1, 1) == 0.5);
  CHECK(risk.j(0, 1) == 0.0);
  CHECK(risk.j(1, 0) == 0.0);

  // general sample against a naive reference loop
  const auto params = prl_test::random_params(6, 77);
  const auto s = generate_returns(params, 15, 5, ReturnDistribution::kGaussian);
  const auto j = build_risk_matrix(s).j;
  for (Eigen::Index a = 0; a < 6; ++a) {
    for (Eigen::Index b = 0; b < 6; ++b) {
      double sum = 0.0;
      for (Eigen::Index u = 0; u < 15; ++u) sum += s.modified(a, u) * s.modified(b, u);
      CHECK(rel_close(j(a, b), sum / 6.0, 1e-13, 1e-15));
    }
  }
}

TEST_CASE("risk matrix is symmetric entry for entry with nonnegative diagonal") {
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    const auto inst = prl_test::random_instance(30, 2.5, seed);
    CHECK(bitwise_equal(inst.risk.j, inst.risk.j.transpose()));
    CHECK(inst.risk.j.diagonal().minCoeff() >= 0.0);
  }
}

TEST_CASE("zero sample gives the zero matrix, flagged singular downstream") {
  ReturnSample sample;
  sample.raw = Eigen::MatrixXd::Zero(2, 3);
  sample.modified = Eigen::MatrixXd::Zero(2, 3);
  const auto risk = build_risk_matrix(sample);
  CHECK(risk.j.isZero(0.0));
  CHECK_THROWS_AS(compute_moments(risk, Eigen::Vector2d(1.0, 2.0)), SingularMatrixError);
}

TEST_CASE("generic samples with p > N are positive definite") {
  // smallest eigenvalue strictly positive on 10 seeded instances
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = prl_test::random_instance(50, 3.0, derive_seed(100, seed));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inst.risk.j);
    REQUIRE(eig.info() == Eigen::Success);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
  // exactly symmetric and Cholesky-factorizable across sizes and seeds
  for (const Eigen::Index n : {10, 50, 100}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = prl_test::random_instance(n, 2.0, derive_seed(200 + n, seed));
      CHECK(bitwise_equal(inst.risk.j, inst.risk.j.transpose()));
      CHECK_NOTHROW(compute_moments(inst.risk, inst.params.means));
    }
  }
}

TEST_CASE("scaling the modified returns by c scales the risk matrix by c^2") {
  const auto params = prl_test::random_params(12, 3);
  const auto sample = generate_returns(params, 30, 11, ReturnDistribution::kGaussian);
  ReturnSample scaled = sample;
  scaled.modified *= 2.0;
  const auto j = build_risk_matrix(sample).j;
  const auto j_scaled = build_risk_matrix(scaled).j;
  const double rel = (j_scaled - 4.0 * j).cwiseAbs().maxCoeff() / j.cwiseAbs().maxCoeff();
  CHECK(rel < 1e-12);
}

TEST_CASE("tiled parameter pattern repeats cyclically") {
  const auto pattern = two_asset(1.0, 3.0, 1.0, 2.0);
  const auto tiled = pattern.tiled(5);
  CHECK(tiled.n_assets() == 5);
  CHECK(tiled.means[0] == 1.0);
  CHECK(tiled.means[1] == 3.0);
  CHECK(tiled.means[4] == 1.0);
  CHECK(tiled.variances[3] == 2.0);
}

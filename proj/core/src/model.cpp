#include "prl/model.hpp"

#include <cmath>
#include <utility>

#include "prl/rng.hpp"

namespace prl {

ReturnDistribution parse_distribution(std::string_view name) {
  if (name == "gaussian") return ReturnDistribution::kGaussian;
  if (name == "uniform") return ReturnDistribution::kUniform;
  if (name == "two-point") return ReturnDistribution::kTwoPoint;
  throw ConfigError("unknown distribution family '" + std::string(name) +
                    "' (expected gaussian, uniform, or two-point)");
}

std::string to_string(ReturnDistribution family) {
  switch (family) {
    case ReturnDistribution::kGaussian: return "gaussian";
    case ReturnDistribution::kUniform: return "uniform";
    case ReturnDistribution::kTwoPoint: return "two-point";
  }
  throw InternalError("unhandled distribution tag");
}

AssetParameters AssetParameters::make(Eigen::VectorXd means, Eigen::VectorXd variances) {
  if (means.size() != variances.size()) {
    throw ConfigError("means and variances must have the same length");
  }
  if (means.size() < 2) {
    throw ConfigError("at least two assets are required");
  }
  for (Eigen::Index i = 0; i < variances.size(); ++i) {
    if (!(variances[i] > 0.0)) {
      throw ConfigError("variances must be strictly positive");
    }
  }
  AssetParameters p;
  p.means = std::move(means);
  p.variances = std::move(variances);
  return p;
}

AssetParameters AssetParameters::tiled(Eigen::Index n) const {
  const Eigen::Index len = n_assets();
  Eigen::VectorXd r(n);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r[i] = means[i % len];
    v[i] = variances[i % len];
  }
  return AssetParameters::make(std::move(r), std::move(v));
}

ReturnSample ReturnSample::from_raw(Eigen::MatrixXd raw, const Eigen::VectorXd& means,
                                    MeanConvention convention) {
  if (raw.rows() != means.size()) {
    throw ConfigError("return table row count does not match the number of assets");
  }
  ReturnSample sample;
  sample.raw = std::move(raw);
  if (convention == MeanConvention::kTrueMeans) {
    sample.modified = sample.raw.colwise() - means;
  } else {
    const Eigen::VectorXd row_means = sample.raw.rowwise().mean();
    sample.modified = sample.raw.colwise() - row_means;
  }
  return sample;
}

ReturnSample generate_returns(const AssetParameters& params, Eigen::Index n_periods,
                              std::uint64_t seed, ReturnDistribution family) {
  const Eigen::Index n = params.n_assets();
  if (n_periods <= n) {
    throw RegularityError("n_periods must exceed n_assets for a regular risk matrix (got p=" +
                          std::to_string(n_periods) + ", N=" + std::to_string(n) + ")");
  }

  Eigen::MatrixXd raw(n, n_periods);
  SplitMix64 rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = params.means[i];
    const double sd = std::sqrt(params.variances[i]);
    switch (family) {
      case ReturnDistribution::kGaussian:
        for (Eigen::Index u = 0; u < n_periods; ++u) {
          raw(i, u) = r + sd * rng.normal();
        }
        break;
      case ReturnDistribution::kUniform: {
        // half-width sqrt(3 v) gives variance v
        const double half = std::sqrt(3.0) * sd;
        for (Eigen::Index u = 0; u < n_periods; ++u) {
          raw(i, u) = r + half * (2.0 * rng.uniform01() - 1.0);
        }
        break;
      }
      case ReturnDistribution::kTwoPoint:
        for (Eigen::Index u = 0; u < n_periods; ++u) {
          raw(i, u) = (rng() >> 63) ? r + sd : r - sd;
        }
        break;
    }
  }
  return ReturnSample::from_raw(std::move(raw), params.means, MeanConvention::kTrueMeans);
}

RiskMatrix build_risk_matrix(const ReturnSample& sample) {
  const Eigen::Index n = sample.n_assets();
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  lower.selfadjointView<Eigen::Lower>().rankUpdate(sample.modified,
                                                   1.0 / static_cast<double>(n));
  RiskMatrix risk;
  // mirror the computed triangle so J is symmetric entry for entry
  risk.j = lower.selfadjointView<Eigen::Lower>();
  return risk;
}

}  // namespace prl

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>

#include "prl/errors.hpp"

namespace prl {

/// Distribution family of the synthetic return draws. Every family is
/// standardized per asset to mean r_i and variance v_i; the closed-form
/// results downstream do not depend on the family choice.
enum class ReturnDistribution {
  kGaussian,
  kUniform,
  kTwoPoint,  // r_i +/- sqrt(v_i) with equal probability
};

/// Parses "gaussian" | "uniform" | "two-point". Throws ConfigError otherwise.
ReturnDistribution parse_distribution(std::string_view name);
std::string to_string(ReturnDistribution family);

/// The investment universe: per-asset true mean returns r_i and variances v_i.
struct AssetParameters {
  Eigen::VectorXd means;      // r_i
  Eigen::VectorXd variances;  // v_i, strictly positive

  Eigen::Index n_assets() const { return means.size(); }

  /// Validates: lengths match, n_assets >= 2, all variances > 0.
  /// Throws ConfigError on violation.
  static AssetParameters make(Eigen::VectorXd means, Eigen::VectorXd variances);

  /// Repeats a base (r, v) pattern cyclically to n assets.
  AssetParameters tiled(Eigen::Index n) const;
};

/// Which mean is subtracted to form the modified return table.
enum class MeanConvention {
  kTrueMeans,    // x = x_raw - r_i (the definition used by all acceptance paths)
  kSampleMeans,  // x = x_raw - row sample mean (exploratory)
};

/// One realization of the N x p return-rate table together with its
/// mean-subtracted (modified) form.
struct ReturnSample {
  Eigen::MatrixXd raw;       // N x p
  Eigen::MatrixXd modified;  // raw minus means, entrywise: modified(i,u) = raw(i,u) - m_i

  Eigen::Index n_assets() const { return raw.rows(); }
  Eigen::Index n_periods() const { return raw.cols(); }
  double alpha() const {
    return static_cast<double>(n_periods()) / static_cast<double>(n_assets());
  }

  /// Builds a sample from an explicit raw table. No p > N check at this
  /// layer; callers that need regularity enforce it themselves.
  static ReturnSample from_raw(Eigen::MatrixXd raw, const Eigen::VectorXd& means,
                               MeanConvention convention = MeanConvention::kTrueMeans);
};

/// Draws an N x p table of independent returns, standardized per asset to
/// (r_i, v_i). Identical (params, n_periods, seed, family) inputs reproduce
/// the sample bit for bit.
///
/// Throws RegularityError when n_periods <= n_assets (the risk matrix would
/// be singular) and ConfigError for invalid parameters.
ReturnSample generate_returns(const AssetParameters& params, Eigen::Index n_periods,
                              std::uint64_t seed, ReturnDistribution family);

/// The sample second-moment matrix of the modified returns,
/// J_ij = (1/N) sum_u x_iu x_ju. Symmetric by construction, positive
/// semidefinite always, positive definite for generic samples with p > N.
struct RiskMatrix {
  Eigen::MatrixXd j;

  Eigen::Index n_assets() const { return j.rows(); }
};

RiskMatrix build_risk_matrix(const ReturnSample& sample);

}  // namespace prl

#include "prl/moments.hpp"

#include <Eigen/Cholesky>

#include "prl/errors.hpp"

namespace prl {

namespace {
constexpr double kPivotTolerance = 1e-12;  // relative to the largest diagonal entry
}

MomentSolves compute_moment_solves(const RiskMatrix& risk, const Eigen::VectorXd& means) {
  const Eigen::Index n = risk.n_assets();
  if (means.size() != n) {
    throw ConfigError("means length does not match the risk matrix dimension");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(risk.j);
  const double max_diag = n > 0 ? risk.j.diagonal().maxCoeff() : 0.0;
  if (llt.info() != Eigen::Success || !(max_diag > 0.0)) {
    throw SingularMatrixError("risk matrix is not positive definite (p <= N or degenerate sample?)");
  }
  // L(i,i)^2 is the i-th Schur-complement pivot
  const double min_l = llt.matrixLLT().diagonal().minCoeff();
  if (!(min_l * min_l >= kPivotTolerance * max_diag)) {
    throw SingularMatrixError("risk matrix pivot below tolerance; sample is numerically singular");
  }

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  MomentSolves out;
  out.jinv_e = llt.solve(ones);
  out.jinv_r = llt.solve(means);

  const double inv_n = 1.0 / static_cast<double>(n);
  MomentSet& m = out.moments;
  m.g0 = ones.dot(out.jinv_e) * inv_n;
  m.g1 = means.dot(out.jinv_e) * inv_n;
  m.g2 = means.dot(out.jinv_r) * inv_n;
  m.f0 = out.jinv_e.squaredNorm() * inv_n;
  m.f1 = out.jinv_r.dot(out.jinv_e) * inv_n;
  m.f2 = out.jinv_r.squaredNorm() * inv_n;
  m.r1 = m.g1 / m.g0;
  m.v = m.g2 / m.g0 - m.r1 * m.r1;
  const double f1_over_f0 = m.f1 / m.f0;
  m.vf = m.f2 / m.f0 - f1_over_f0 * f1_over_f0;
  m.eps0 = 1.0 / (2.0 * m.g0);
  return out;
}

MomentSet compute_moments(const RiskMatrix& risk, const Eigen::VectorXd& means) {
  return compute_moment_solves(risk, means).moments;
}

}  // namespace prl

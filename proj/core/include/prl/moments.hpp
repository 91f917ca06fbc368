#pragma once

#include <Eigen/Dense>

#include "prl/model.hpp"

namespace prl {

/// The six quadratic-form moments of the inverse risk matrix,
///   g0 = e'J^-1 e / N   g1 = r'J^-1 e / N   g2 = r'J^-1 r / N
///   f0 = e'J^-2 e / N   f1 = r'J^-2 e / N   f2 = r'J^-2 r / N
/// plus the derived scalars used everywhere downstream:
///   r1 = g1/g0, v = g2/g0 - r1^2, vf = f2/f0 - (f1/f0)^2, eps0 = 1/(2 g0).
struct MomentSet {
  double g0 = 0, g1 = 0, g2 = 0;
  double f0 = 0, f1 = 0, f2 = 0;
  double r1 = 0;    // mean effective return in the J^-1 metric
  double v = 0;     // its variance; zero iff r is proportional to e
  double vf = 0;    // same variance in the J^-2 metric
  double eps0 = 0;  // minimal investment risk per asset
};

/// Moments plus the two cached linear solves they were computed from.
/// Portfolio construction reuses these vectors, so one Cholesky
/// factorization serves the whole instance.
struct MomentSolves {
  MomentSet moments;
  Eigen::VectorXd jinv_e;  // y solving J y = e
  Eigen::VectorXd jinv_r;  // z solving J z = r
};

/// Computes the moments through Cholesky solves (never an explicit inverse).
///
/// Throws SingularMatrixError when the factorization fails or a pivot falls
/// below 1e-12 times the largest diagonal entry of J, the signature of
/// p <= N or a degenerate sample.
MomentSolves compute_moment_solves(const RiskMatrix& risk, const Eigen::VectorXd& means);

MomentSet compute_moments(const RiskMatrix& risk, const Eigen::VectorXd& means);

}  // namespace prl

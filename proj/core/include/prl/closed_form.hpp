#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "prl/moments.hpp"

namespace prl {

/// The two extremal portfolios of the expected-return problem under the
/// budget (e'w = N) and risk (w'Jw/2 = N eps) constraints, with their
/// Lagrange multipliers. At tau = 1 both portfolios coincide with the global
/// minimum-risk portfolio and the multipliers are absent (the closed forms
/// diverge; the solution is taken as the analytic limit).
struct PortfolioSolution {
  Eigen::VectorXd w_plus;   // return-maximizing holdings
  Eigen::VectorXd w_minus;  // return-minimizing holdings
  double r_plus = 0;        // maximal expected return per asset
  double r_minus = 0;       // minimal expected return per asset
  std::optional<double> theta_plus;  // risk multiplier, > 0 on the max branch
  std::optional<double> theta_minus;
  std::optional<double> k_plus;  // budget multiplier
  std::optional<double> k_minus;
  double tau = 1;  // risk tolerance
  double eps = 0;  // risk per asset actually allowed: tau * eps0
};

/// Geometry of the pair (w+, w-): concentrations, overlap, mean square
/// error and correlation coefficient.
struct GeometryStats {
  double q_w_plus = 0;   // w+'w+ / N
  double q_w_minus = 0;  // w-'w- / N
  double overlap_c = 0;  // w+'w- / N
  double delta = 0;      // mean square error, sum (w+ - w-)^2 / N
  double rho = 0;        // correlation coefficient in [-1, 1]
};

struct FrontierPoint {
  double r = 0;
  double eps = 0;
};

/// Sampled arc of the efficient-frontier parabola
/// eps(R) = (1/(2 g0)) (1 + (R - r1)^2 / v).
struct FrontierCurve {
  std::vector<FrontierPoint> points;  // ordered by r
  double r1 = 0;
  double v = 0;
  double eps0 = 0;
};

/// Evaluates the closed-form extremal portfolios at risk tolerance tau >= 1,
/// reusing the cached solves (no factorization here).
///
/// Throws InfeasibleRiskError for tau < 1 and DegenerateReturnsError when
/// v <= 1e-10 * g2 with tau > 1 (extremal direction undefined).
PortfolioSolution solve_portfolio(const MomentSolves& solves, double tau);

/// Convenience: one Cholesky, full chain.
PortfolioSolution solve_portfolio(const RiskMatrix& risk, const Eigen::VectorXd& means,
                                  double tau);

/// Geometry straight from the two vectors.
GeometryStats geometry_statistics(const PortfolioSolution& solution);

/// Geometry from the moment scalars alone (the closed-form route); touches
/// no vectors. At tau = 1 returns the analytic limit
/// (delta = 0, rho = 1, c = q_w = f0/g0^2).
GeometryStats closed_form_statistics(const MomentSet& moments, double tau);

/// Samples the frontier parabola at n_points >= 2 equally spaced returns in
/// [r_min, r_max]; the vertex (r1, eps0) is inserted when it lies inside the
/// range.
FrontierCurve frontier(const MomentSet& moments, double r_min, double r_max,
                       int n_points);

}  // namespace prl

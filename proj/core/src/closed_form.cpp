#include "prl/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "prl/errors.hpp"

namespace prl {

namespace {

void check_tolerance_regime(const MomentSet& m, double tau) {
  if (tau < 1.0) {
    throw InfeasibleRiskError("risk tolerance tau must be >= 1 (requested risk below the minimum)");
  }
  if (tau > 1.0 && !(m.v > 1e-10 * m.g2)) {
    throw DegenerateReturnsError(
        "effective returns are proportional to the all-ones vector; the extremal direction is undefined");
  }
}

}  // namespace

PortfolioSolution solve_portfolio(const MomentSolves& solves, double tau) {
  const MomentSet& m = solves.moments;
  check_tolerance_regime(m, tau);

  PortfolioSolution sol;
  sol.tau = tau;
  sol.eps = tau * m.eps0;

  if (tau == 1.0) {
    // global minimum-risk portfolio; the multiplier closed forms diverge here
    sol.w_plus = solves.jinv_e / m.g0;
    sol.w_minus = sol.w_plus;
    sol.r_plus = m.r1;
    sol.r_minus = m.r1;
    return sol;
  }

  const double excess = std::sqrt(m.v * (tau - 1.0));
  const double theta = m.g0 * std::sqrt(m.v / (tau - 1.0));
  sol.theta_plus = theta;
  sol.theta_minus = -theta;
  sol.k_plus = theta / m.g0 - m.r1;
  sol.k_minus = -theta / m.g0 - m.r1;
  sol.r_plus = m.r1 + excess;
  sol.r_minus = m.r1 - excess;

  // w_+- = (1/g0) (J^-1 e +- sqrt((tau-1)/v) J^-1 (r - r1 e))
  const double scale = std::sqrt((tau - 1.0) / m.v);
  const Eigen::VectorXd direction = scale * (solves.jinv_r - m.r1 * solves.jinv_e);
  sol.w_plus = (solves.jinv_e + direction) / m.g0;
  sol.w_minus = (solves.jinv_e - direction) / m.g0;
  return sol;
}

PortfolioSolution solve_portfolio(const RiskMatrix& risk, const Eigen::VectorXd& means,
                                  double tau) {
  return solve_portfolio(compute_moment_solves(risk, means), tau);
}

GeometryStats geometry_statistics(const PortfolioSolution& solution) {
  const double n = static_cast<double>(solution.w_plus.size());
  const double norm_plus = solution.w_plus.norm();
  const double norm_minus = solution.w_minus.norm();
  if (!(norm_plus > 0.0) || !(norm_minus > 0.0)) {
    throw InternalError("zero-norm portfolio cannot satisfy the budget constraint");
  }

  GeometryStats g;
  g.q_w_plus = solution.w_plus.squaredNorm() / n;
  g.q_w_minus = solution.w_minus.squaredNorm() / n;
  g.overlap_c = solution.w_plus.dot(solution.w_minus) / n;
  g.delta = (solution.w_plus - solution.w_minus).squaredNorm() / n;
  g.rho = solution.w_plus.dot(solution.w_minus) / (norm_plus * norm_minus);
  return g;
}

GeometryStats closed_form_statistics(const MomentSet& m, double tau) {
  check_tolerance_regime(m, tau);

  GeometryStats g;
  if (tau == 1.0) {
    // identical portfolios: the tau -> 1+ limit of every expression below
    const double q = m.f0 / (m.g0 * m.g0);
    g.q_w_plus = q;
    g.q_w_minus = q;
    g.overlap_c = q;
    g.delta = 0.0;
    g.rho = 1.0;
    return g;
  }

  const double ratio = m.v / (tau - 1.0);
  const double prefactor = m.f0 * (tau - 1.0) / (m.g0 * m.g0 * m.v);
  const double shift = m.f1 / m.f0 - m.g1 / m.g0;
  const double root = std::sqrt(ratio);

  g.q_w_plus = prefactor * (m.vf + (shift + root) * (shift + root));
  g.q_w_minus = prefactor * (m.vf + (shift - root) * (shift - root));
  g.overlap_c = -prefactor * (m.vf + shift * shift - ratio);
  g.delta = 4.0 * prefactor * (m.vf + shift * shift);

  const double a = m.vf + shift * shift - ratio;
  g.rho = -a / std::sqrt(a * a + 4.0 * ratio * m.vf);
  return g;
}

FrontierCurve frontier(const MomentSet& m, double r_min, double r_max, int n_points) {
  if (n_points < 2) {
    throw ConfigError("frontier needs at least two sample points");
  }
  if (!(r_max > r_min)) {
    throw ConfigError("frontier requires r_max > r_min");
  }
  if (!(m.v > 0.0)) {
    throw DegenerateReturnsError("frontier undefined for zero effective-return variance");
  }

  const auto eps_at = [&m](double r) {
    const double d = r - m.r1;
    return m.eps0 * (1.0 + d * d / m.v);
  };

  FrontierCurve curve;
  curve.r1 = m.r1;
  curve.v = m.v;
  curve.eps0 = m.eps0;
  curve.points.reserve(static_cast<std::size_t>(n_points) + 1);
  const double step = (r_max - r_min) / static_cast<double>(n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double r = (i == n_points - 1) ? r_max : r_min + step * i;
    curve.points.push_back({r, eps_at(r)});
  }
  if (m.r1 >= r_min && m.r1 <= r_max) {
    const bool already_sampled =
        std::any_of(curve.points.begin(), curve.points.end(),
                    [&](const FrontierPoint& p) { return p.r == m.r1; });
    if (!already_sampled) {
      auto pos = std::lower_bound(curve.points.begin(), curve.points.end(), m.r1,
                                  [](const FrontierPoint& p, double r) { return p.r < r; });
      curve.points.insert(pos, {m.r1, m.eps0});
    }
  }
  return curve;
}

}  // namespace prl

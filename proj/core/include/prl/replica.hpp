#pragma once

#include "prl/model.hpp"
#include "prl/moments.hpp"

namespace prl {

/// Empirical per-asset averages <f(r, v)> of the functions the asymptotic
/// formulas consume. Computed with running (Welford) means, so a constant
/// asset list yields the per-asset value exactly.
struct QuenchedAverages {
  double inv_v = 0;       // <1/v>
  double inv_v_r = 0;     // <r/v>
  double inv_v_r2 = 0;    // <r^2/v>
  double inv_v2 = 0;      // <1/v^2>
  double inv_v2_r = 0;    // <r/v^2>
  double inv_v2_r2 = 0;   // <r^2/v^2>
  double mean_log_v = 0;  // <log v>, only the constant term of phi(0) needs it
};

QuenchedAverages quenched_averages(const AssetParameters& params);

/// Saddle-point order parameters of the asymptotic analysis at ratio
/// alpha = p/N and source (k, theta).
struct OrderParameters {
  double chi_s = 0;        // 1/(alpha - 1)
  double q_s = 0;          // alpha/(alpha-1)^3 <(k + theta r)^2 / v>
  double chi_tilde_s = 0;  // alpha - 1
  double q_tilde_s = 0;    // <(k + theta r)^2 / v> / (alpha - 1)
};

struct PhiValues {
  double phi0 = 0;        // phi(0)
  double phi_prime0 = 0;  // phi'(0)
};

/// Large-N closed forms of the six moments (and derived scalars) at ratio
/// alpha > 1. Throws AsymptoticRegimeError for alpha <= 1.
MomentSet replica_moments(const QuenchedAverages& avgs, double alpha);

OrderParameters replica_order_parameters(const QuenchedAverages& avgs, double alpha,
                                         double k, double theta);

/// The generating values phi(0) and phi'(0); their second derivatives in
/// (k, theta) are g0,g1,g2 and f0,f1,f2 respectively.
PhiValues replica_phi(const QuenchedAverages& avgs, double alpha, double k,
                      double theta, double mean_log_v);

/// Bundled asymptotic prediction for one parameter set.
struct ReplicaPrediction {
  MomentSet moments;
  double chi_s = 0;
  double q_s = 0;
  double chi_tilde_s = 0;
  double q_tilde_s = 0;
  double alpha = 0;
};

ReplicaPrediction predict(const AssetParameters& params, double alpha, double k = 0.0,
                          double theta = 0.0);

}  // namespace prl

#include "prl/replica.hpp"

#include <cmath>

#include "prl/errors.hpp"

namespace prl {

namespace {

void require_asymptotic_regime(double alpha) {
  if (!(alpha > 1.0)) {
    throw AsymptoticRegimeError("asymptotic formulas require alpha > 1");
  }
}

// Running mean; returns the common value exactly when all inputs coincide.
class RunningMean {
 public:
  void add(double x) {
    count_ += 1.0;
    mean_ += (x - mean_) / count_;
  }
  double value() const { return mean_; }

 private:
  double mean_ = 0.0;
  double count_ = 0.0;
};

// <(k + theta r)^2 f(v)> expanded over the stored averages
double source_term(double k, double theta, double m0, double m1, double m2) {
  return k * k * m0 + 2.0 * k * theta * m1 + theta * theta * m2;
}

}  // namespace

QuenchedAverages quenched_averages(const AssetParameters& params) {
  RunningMean inv_v, inv_v_r, inv_v_r2, inv_v2, inv_v2_r, inv_v2_r2, log_v;
  for (Eigen::Index i = 0; i < params.n_assets(); ++i) {
    const double r = params.means[i];
    const double w = 1.0 / params.variances[i];
    const double w2 = w * w;
    inv_v.add(w);
    inv_v_r.add(r * w);
    inv_v_r2.add(r * r * w);
    inv_v2.add(w2);
    inv_v2_r.add(r * w2);
    inv_v2_r2.add(r * r * w2);
    log_v.add(std::log(params.variances[i]));
  }
  QuenchedAverages avgs;
  avgs.inv_v = inv_v.value();
  avgs.inv_v_r = inv_v_r.value();
  avgs.inv_v_r2 = inv_v_r2.value();
  avgs.inv_v2 = inv_v2.value();
  avgs.inv_v2_r = inv_v2_r.value();
  avgs.inv_v2_r2 = inv_v2_r2.value();
  avgs.mean_log_v = log_v.value();
  return avgs;
}

MomentSet replica_moments(const QuenchedAverages& avgs, double alpha) {
  require_asymptotic_regime(alpha);
  const double am1 = alpha - 1.0;
  const double c2 = 1.0 / (am1 * am1);
  const double c3 = c2 / am1;

  MomentSet m;
  m.g0 = avgs.inv_v / am1;
  m.g1 = avgs.inv_v_r / am1;
  m.g2 = avgs.inv_v_r2 / am1;
  m.f0 = c3 * avgs.inv_v * avgs.inv_v + c2 * avgs.inv_v2;
  m.f1 = c3 * avgs.inv_v * avgs.inv_v_r + c2 * avgs.inv_v2_r;
  m.f2 = c3 * avgs.inv_v * avgs.inv_v_r2 + c2 * avgs.inv_v2_r2;
  m.r1 = avgs.inv_v_r / avgs.inv_v;
  m.v = avgs.inv_v_r2 / avgs.inv_v - m.r1 * m.r1;
  const double f1_over_f0 = m.f1 / m.f0;
  m.vf = m.f2 / m.f0 - f1_over_f0 * f1_over_f0;
  m.eps0 = 1.0 / (2.0 * m.g0);
  return m;
}

OrderParameters replica_order_parameters(const QuenchedAverages& avgs, double alpha,
                                         double k, double theta) {
  require_asymptotic_regime(alpha);
  const double am1 = alpha - 1.0;
  const double source = source_term(k, theta, avgs.inv_v, avgs.inv_v_r, avgs.inv_v_r2);

  OrderParameters op;
  op.chi_s = 1.0 / am1;
  op.q_s = alpha / (am1 * am1 * am1) * source;
  op.chi_tilde_s = am1;
  op.q_tilde_s = source / am1;
  return op;
}

PhiValues replica_phi(const QuenchedAverages& avgs, double alpha, double k, double theta,
                      double mean_log_v) {
  require_asymptotic_regime(alpha);
  const double am1 = alpha - 1.0;
  const double source1 = source_term(k, theta, avgs.inv_v, avgs.inv_v_r, avgs.inv_v_r2);
  const double source2 = source_term(k, theta, avgs.inv_v2, avgs.inv_v2_r, avgs.inv_v2_r2);

  PhiValues phi;
  phi.phi0 = -0.5 * alpha * std::log(alpha) + 0.5 * (alpha + 1.0) * std::log(am1) + 0.5 -
             0.5 * mean_log_v + source1 / (2.0 * am1);
  phi.phi_prime0 = avgs.inv_v / (2.0 * am1) +
                   avgs.inv_v * source1 / (2.0 * am1 * am1 * am1) +
                   source2 / (2.0 * am1 * am1);
  return phi;
}

ReplicaPrediction predict(const AssetParameters& params, double alpha, double k,
                          double theta) {
  const QuenchedAverages avgs = quenched_averages(params);
  const OrderParameters op = replica_order_parameters(avgs, alpha, k, theta);

  ReplicaPrediction pred;
  pred.moments = replica_moments(avgs, alpha);
  pred.chi_s = op.chi_s;
  pred.q_s = op.q_s;
  pred.chi_tilde_s = op.chi_tilde_s;
  pred.q_tilde_s = op.q_tilde_s;
  pred.alpha = alpha;
  return pred;
}

}  // namespace prl

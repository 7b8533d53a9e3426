#include "aclqr/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "aclqr/controller.hpp"
#include "aclqr/dare.hpp"
#include "aclqr/error.hpp"

namespace aclqr {
namespace {

void require_parameter_data(const TrajectoryLog& log) {
  log.validate_shape();
  require(log.p > 0 && !log.theta.empty(), "certificate: log carries no true-parameter data");
}

template <class Series>
void finish(Series& s, std::size_t count) {
  const auto held = std::count(s.precondition.begin(), s.precondition.end(), true);
  s.precondition_fraction = count == 0 ? 1.0 : static_cast<double>(held) / count;
}

double tail_fraction(const std::vector<double>& terms) {
  double total = 0.0;
  for (double t : terms) total += t;
  if (total <= 0.0) return 0.0;
  const std::size_t start = (3 * terms.size()) / 4;
  double tail = 0.0;
  for (std::size_t k = start; k < terms.size(); ++k) tail += terms[k];
  return tail / total;
}

}  // namespace

SlackSeries check_prop1a(const TrajectoryLog& log, double mu, double d, double tol) {
  require_parameter_data(log);
  require(mu > 0.0 && d >= 0.0, "check_prop1a: need mu > 0 and d >= 0");
  SlackSeries s;
  const std::size_t T = log.steps();
  for (std::size_t k = 0; k < T; ++k) {
    const Vector phi = log.theta_hat[k] - log.theta[k];
    const Vector phi_next = log.theta_hat[k + 1] - log.theta[k + 1];
    const double dtheta = (log.theta[k + 1] - log.theta[k]).norm();
    const double rhs = -mu * log.e1[k].squaredNorm() + mu * log.w[k].squaredNorm() + 2.0 * d * dtheta;
    const double lhs = phi_next.squaredNorm() - phi.squaredNorm();
    const double slack = rhs - lhs;
    const bool pre = log.stepsize_ok[k];
    s.slack.push_back(slack);
    s.precondition.push_back(pre);
    if (pre) {
      s.min_slack = std::min(s.min_slack, slack);
      if (slack < -tol && !s.first_violation) s.first_violation = k;
    }
  }
  finish(s, T);
  return s;
}

SlackSeries check_prop1b(const TrajectoryLog& log, double mu, double tol) {
  require_parameter_data(log);
  require(mu > 0.0, "check_prop1b: need mu > 0");
  SlackSeries s;
  const std::size_t T = log.steps();
  const double root_mu = std::sqrt(mu);
  for (std::size_t k = 0; k < T; ++k) {
    const double slack = root_mu * (log.e1[k] + log.w[k]).norm() -
                         (log.theta_hat[k + 1] - log.theta_hat[k]).norm();
    const bool pre = log.stepsize_ok[k];
    s.slack.push_back(slack);
    s.precondition.push_back(pre);
    if (pre) {
      s.min_slack = std::min(s.min_slack, slack);
      if (slack < -tol && !s.first_violation) s.first_violation = k;
    }
  }
  finish(s, T);
  return s;
}

PrefixBoundSeries check_prop1c(const TrajectoryLog& log, double mu, double d, double tol) {
  require_parameter_data(log);
  return check_prop1c(log, mu, d, log.theta_hat.front() - log.theta.front(), tol);
}

PrefixBoundSeries check_prop1c(const TrajectoryLog& log, double mu, double d,
                               const Vector& phi0, double tol) {
  require_parameter_data(log);
  require(mu > 0.0 && d >= 0.0, "check_prop1c: need mu > 0 and d >= 0");
  PrefixBoundSeries s;
  double lhs = 0.0;
  double rhs = phi0.squaredNorm() / mu;
  bool pre = true;
  for (std::size_t k = 0; k < log.steps(); ++k) {
    lhs += log.e1[k].squaredNorm();
    rhs += log.w[k].squaredNorm() + (2.0 * d / mu) * (log.theta[k + 1] - log.theta[k]).norm();
    pre = pre && log.stepsize_ok[k];
    s.lhs.push_back(lhs);
    s.rhs.push_back(rhs);
    s.precondition.push_back(pre);
    if (pre) {
      s.min_gap = std::min(s.min_gap, rhs - lhs);
      if (lhs > rhs + tol && !s.first_violation) s.first_violation = k;
    }
  }
  return s;
}

DecreaseCheck check_frozen_lqr_decrease(const TrajectoryLog& log, const Matrix& Q,
                                        const Matrix& R, double rel_tol) {
  log.validate_shape();
  require(Q.rows() == log.n && R.rows() == log.m, "frozen decrease: Q/R do not match the log");
  for (std::size_t k = 0; k < log.theta_hat.size(); ++k) {
    if (log.theta_hat[k] != log.theta_hat.front()) {
      throw_invalid("frozen decrease: estimate varies along the log (step " +
                    std::to_string(k) + ")");
    }
  }
  for (std::size_t k = 0; k < log.steps(); ++k) {
    if (!log.w[k].isZero(0.0)) {
      throw_invalid("frozen decrease: nonzero disturbance at step " + std::to_string(k));
    }
  }
  DecreaseCheck c;
  for (std::size_t k = 0; k < log.steps(); ++k) {
    const double stage = log.x[k].dot(Q * log.x[k]) + log.u[k].dot(R * log.u[k]);
    const double defect = log.V[k + 1] - log.V[k] + stage;
    const double rel = std::abs(defect) / (1.0 + log.V[k]);
    c.relative_defect.push_back(rel);
    c.max_relative_defect = std::max(c.max_relative_defect, rel);
    if (!(rel <= rel_tol) && !c.first_violation) c.first_violation = k;
  }
  return c;
}

L2Sums l2_sums(const TrajectoryLog& log) {
  L2Sums s;
  for (const auto& x : log.x) s.x2 += x.squaredNorm();
  for (std::size_t k = 0; k < log.steps(); ++k) {
    s.w2 += log.w[k].squaredNorm();
    s.e2 += log.e1[k].squaredNorm();
    s.dtheta += (log.theta[k + 1] - log.theta[k]).norm();
  }
  return s;
}

bool CertificateReport::any_violation() const {
  return std::any_of(inequalities.begin(), inequalities.end(),
                     [](const InequalitySummary& s) { return s.first_violation.has_value(); });
}

CertificateReport l2_gain_report(const TrajectoryLog& log, double tail_threshold) {
  log.validate_shape();
  CertificateReport r;
  r.steps = log.steps();
  r.diverged = log.diverged;
  r.tail_threshold = tail_threshold;
  r.sums = l2_sums(log);

  std::vector<double> x2, w2, dth;
  for (const auto& x : log.x) {
    x2.push_back(x.squaredNorm());
    r.max_state_norm = std::max(r.max_state_norm, x.norm());
  }
  for (std::size_t k = 0; k < log.steps(); ++k) {
    w2.push_back(log.w[k].squaredNorm());
    dth.push_back((log.theta[k + 1] - log.theta[k]).norm());
  }
  r.x2_tail_fraction = tail_fraction(x2);
  r.w2_tail_fraction = tail_fraction(w2);
  r.dtheta_tail_fraction = tail_fraction(dth);
  r.bounded = !log.diverged && std::isfinite(r.max_state_norm);
  r.converging = r.bounded && r.x2_tail_fraction < tail_threshold;
  r.w_l2 = r.w2_tail_fraction < tail_threshold;
  r.dtheta_l1 = r.dtheta_tail_fraction < tail_threshold;
  r.empirical_gain = log.diverged ? std::numeric_limits<double>::infinity()
                                  : r.sums.x2 / (r.sums.w2 + r.sums.dtheta + 1.0);
  return r;
}

void add_lms_certificates(CertificateReport& report, const TrajectoryLog& log, double mu,
                          double d, double tol) {
  const SlackSeries a = check_prop1a(log, mu, d, tol);
  const SlackSeries b = check_prop1b(log, mu, tol);
  const PrefixBoundSeries c = check_prop1c(log, mu, d, tol);
  auto note_for = [](double fraction) {
    return fraction < 1.0 ? std::string("preconditions unmet at some steps (not asserted there)")
                          : std::string();
  };
  report.inequalities.push_back(
      {"lms_error_decrease", a.min_slack, a.first_violation, a.precondition_fraction,
       note_for(a.precondition_fraction)});
  report.inequalities.push_back(
      {"lms_estimate_increment", b.min_slack, b.first_violation, b.precondition_fraction,
       note_for(b.precondition_fraction)});
  const auto held = std::count(c.precondition.begin(), c.precondition.end(), true);
  const double frac = c.precondition.empty() ? 1.0 : static_cast<double>(held) / c.precondition.size();
  report.inequalities.push_back(
      {"lms_prediction_error_sum", c.min_gap, c.first_violation, frac, note_for(frac)});
}

VTildeTrace vtilde_trace(const TrajectoryLog& log, const AffineParametrization& par,
                         const ParamBox& box, const Matrix& Q, const Matrix& R,
                         double beta_over_mu, int grid_per_dim) {
  log.validate_shape();
  require(beta_over_mu >= 0.0, "vtilde_trace: beta/mu must be nonnegative");
  VTildeTrace t;
  t.q_lower = min_eigenvalue(Q);
  std::vector<Vector> points = box_grid(box, grid_per_dim);
  points.insert(points.end(), log.theta_hat.begin(), log.theta_hat.end());
  for (const auto& theta : points) {
    const SystemMatrices sys = eval_system(par, theta);
    t.p_upper = std::max(t.p_upper, max_eigenvalue(solve_dare(sys.A, sys.B, Q, R).P));
  }
  for (std::size_t k = 0; k < log.x.size(); ++k) {
    const double phi2 = (log.theta_hat[k] - log.theta[k]).squaredNorm();
    const double x2 = log.x[k].squaredNorm();
    t.value.push_back(log.V[k] + beta_over_mu * phi2);
    t.lower.push_back(t.q_lower * x2 + beta_over_mu * phi2);
    t.upper.push_back(t.p_upper * x2 + beta_over_mu * phi2);
  }
  return t;
}

}  // namespace aclqr

#pragma once

// Runtime certificates evaluated on completed trajectory logs.
//
// The LMS inequalities are checked per step wherever the step-size condition
// mu ||D(x_k,u_k)||^2 <= 1 held at that step (logged as stepsize_ok); the
// inequality is not asserted where it did not. Slacks are RHS - LHS, so a
// certificate holds when the slack is >= -tolerance.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aclqr/linalg.hpp"
#include "aclqr/model.hpp"
#include "aclqr/sim.hpp"

namespace aclqr {

inline constexpr double kDefaultCertificateTolerance = 1e-8;

struct SlackSeries {
  std::vector<double> slack;
  std::vector<bool> precondition;
  /// Minimum over steps whose precondition held (+inf if none).
  double min_slack = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> first_violation;
  double precondition_fraction = 1.0;

  bool holds() const { return !first_violation.has_value(); }
};

/// ||phi_{k+1}||^2 - ||phi_k||^2 <= -mu ||e_k||^2 + mu ||w_k||^2 + 2 d ||dtheta_k||
SlackSeries check_prop1a(const TrajectoryLog& log, double mu, double d,
                         double tol = kDefaultCertificateTolerance);

/// ||theta_hat_{k+1} - theta_hat_k|| <= sqrt(mu) ||e_k + w_k||
SlackSeries check_prop1b(const TrajectoryLog& log, double mu,
                         double tol = kDefaultCertificateTolerance);

/// Prefix sums for every horizon T:
///   lhs_T = sum_{k<=T} ||e_k||^2
///   rhs_T = ||phi_0||^2 / mu + sum_{k<=T} (||w_k||^2 + (2d/mu) ||dtheta_k||)
/// precondition_T is true when the step-size condition held at every k <= T.
struct PrefixBoundSeries {
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<bool> precondition;
  double min_gap = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> first_violation;

  bool holds() const { return !first_violation.has_value(); }
};

PrefixBoundSeries check_prop1c(const TrajectoryLog& log, double mu, double d,
                               double tol = kDefaultCertificateTolerance);
PrefixBoundSeries check_prop1c(const TrajectoryLog& log, double mu, double d,
                               const Vector& phi0, double tol = kDefaultCertificateTolerance);

/// Exact LQR decrease for a run with a constant estimate, no disturbance and
/// u = Kx: V_{k+1} - V_k = -(x_k'Q x_k + u_k'R u_k). Reports
/// |defect| / (1 + V_k) per step. Throws Error(kInvalidArgument) when the log
/// does not conform (varying estimate, nonzero disturbance).
struct DecreaseCheck {
  std::vector<double> relative_defect;
  double max_relative_defect = 0.0;
  std::optional<std::size_t> first_violation;

  bool holds() const { return !first_violation.has_value(); }
};

DecreaseCheck check_frozen_lqr_decrease(const TrajectoryLog& log, const Matrix& Q,
                                        const Matrix& R, double rel_tol = 1e-9);

struct L2Sums {
  double x2 = 0.0;      // sum_{k=0..T} ||x_k||^2
  double w2 = 0.0;      // sum_{k<T} ||w_k||^2
  double dtheta = 0.0;  // sum_{k<T} ||theta_{k+1} - theta_k||
  double e2 = 0.0;      // sum_{k<T} ||e_k||^2
};

L2Sums l2_sums(const TrajectoryLog& log);

struct InequalitySummary {
  std::string name;
  double min_slack = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> first_violation;
  double precondition_fraction = 1.0;
  std::string note;
};

/// Empirical finite-gain accounting plus any certificate summaries.
///   bounded:     run did not diverge
///   converging:  the final quarter contributes less than `tail_threshold` of
///                sum ||x_k||^2
///   w_l2 / dtheta_l1: the same tail test applied to sum ||w||^2 and
///                sum ||dtheta|| (empirical square-/summability)
/// empirical_gain = sum ||x||^2 / (sum ||w||^2 + sum ||dtheta|| + 1), +inf on
/// divergence.
struct CertificateReport {
  std::size_t steps = 0;
  bool diverged = false;
  bool bounded = false;
  bool converging = false;
  bool w_l2 = false;
  bool dtheta_l1 = false;
  double tail_threshold = 1e-2;
  double x2_tail_fraction = 0.0;
  double w2_tail_fraction = 0.0;
  double dtheta_tail_fraction = 0.0;
  double max_state_norm = 0.0;
  double empirical_gain = 0.0;
  L2Sums sums;
  std::vector<InequalitySummary> inequalities;

  bool any_violation() const;
};

CertificateReport l2_gain_report(const TrajectoryLog& log, double tail_threshold = 1e-2);

/// Appends the three LMS certificate summaries to `report`.
void add_lms_certificates(CertificateReport& report, const TrajectoryLog& log, double mu,
                          double d, double tol = kDefaultCertificateTolerance);

/// V~_k = V_k + (beta/mu) ||phi_k||^2 with its sandwich
///   q_lower ||x||^2 + (beta/mu)||phi||^2 <= V~ <= p_upper ||x||^2 + (beta/mu)||phi||^2
/// q_lower = lambda_min(Q); p_upper = max lambda_max(P(theta)) over a box grid
/// together with every estimate visited by the log.
struct VTildeTrace {
  std::vector<double> value;
  std::vector<double> lower;
  std::vector<double> upper;
  double q_lower = 0.0;
  double p_upper = 0.0;
};

VTildeTrace vtilde_trace(const TrajectoryLog& log, const AffineParametrization& par,
                         const ParamBox& box, const Matrix& Q, const Matrix& R,
                         double beta_over_mu, int grid_per_dim = 15);

}  // namespace aclqr

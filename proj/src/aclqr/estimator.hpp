#pragma once

#include "aclqr/linalg.hpp"
#include "aclqr/model.hpp"

namespace aclqr {

/// Projected LMS estimator state: current estimate and step size mu.
struct EstimatorState {
  Vector theta_hat;
  double mu = 1.0;
};

/// Nominal one-step prediction A(theta_hat) x + B(theta_hat) u.
Vector predict(const AffineParametrization& par, const Vector& theta_hat, const Vector& x,
               const Vector& u);

/// theta_hat+ = Proj_box[theta_hat + mu * D(x_prev,u_prev)' (x_new - predict(x_prev,u_prev))]
EstimatorState lms_update(const EstimatorState& state, const ParamBox& box,
                          const AffineParametrization& par, const Vector& x_prev,
                          const Vector& u_prev, const Vector& x_new);

/// Conservative admissible step size over the ball ||x|| <= X, ||u|| <= U:
/// 1 / sum_i (||A_incr_i|| X + ||B_incr_i|| U)^2, which never exceeds
/// 1 / sup ||D(x,u)||^2. Returns +infinity when every increment is zero.
double max_admissible_step(const AffineParametrization& par, double X, double U);

/// Pointwise form of the step-size condition: mu * ||D(x,u)||^2 <= 1.
bool step_size_admissible(const AffineParametrization& par, double mu, const Vector& x,
                          const Vector& u);

}  // namespace aclqr

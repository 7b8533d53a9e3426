#include "aclqr/estimator.hpp"

#include <cmath>
#include <limits>

#include "aclqr/error.hpp"

namespace aclqr {

Vector predict(const AffineParametrization& par, const Vector& theta_hat, const Vector& x,
               const Vector& u) {
  require(x.size() == par.n() && u.size() == par.m(), "predict: dimension mismatch");
  const SystemMatrices sys = eval_system(par, theta_hat);
  return sys.A * x + sys.B * u;
}

EstimatorState lms_update(const EstimatorState& state, const ParamBox& box,
                          const AffineParametrization& par, const Vector& x_prev,
                          const Vector& u_prev, const Vector& x_new) {
  require(x_new.size() == par.n(), "lms_update: x_new has wrong dimension");
  require(box.dim() == par.p(), "lms_update: box dimension differs from p");
  const RegressionTerms t = regression_terms(par, x_prev, u_prev);
  const Vector innovation = x_new - (t.delta + t.D * state.theta_hat);
  EstimatorState next = state;
  next.theta_hat = box.project(state.theta_hat + state.mu * t.D.transpose() * innovation);
  return next;
}

double max_admissible_step(const AffineParametrization& par, double X, double U) {
  require(X > 0.0 && U > 0.0, "max_admissible_step: X and U must be positive");
  double bound = 0.0;
  for (Index i = 0; i < par.p(); ++i) {
    const double col =
        spectral_norm(par.A_incr()[i]) * X + spectral_norm(par.B_incr()[i]) * U;
    bound += col * col;
  }
  if (bound == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / bound;
}

bool step_size_admissible(const AffineParametrization& par, double mu, const Vector& x,
                          const Vector& u) {
  const double dn = spectral_norm(regression_terms(par, x, u).D);
  return mu * dn * dn <= 1.0;
}

}  // namespace aclqr

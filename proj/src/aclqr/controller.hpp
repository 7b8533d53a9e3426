#pragma once

#include <optional>
#include <vector>

#include "aclqr/dare.hpp"
#include "aclqr/model.hpp"

namespace aclqr {

/// Remembers the last certainty-equivalent solution. A request whose estimate
/// lies within `recompute_tolerance` of the cached one is served from the
/// cache; the default tolerance 0 only reuses a bitwise-equal estimate.
class PolicyCache {
 public:
  explicit PolicyCache(double recompute_tolerance = 0.0)
      : recompute_tolerance_(recompute_tolerance) {}

  double recompute_tolerance() const { return recompute_tolerance_; }
  bool has_value() const { return theta_.has_value(); }
  const std::optional<Vector>& theta() const { return theta_; }
  int solves() const { return solves_; }

 private:
  friend const RiccatiSolution& ce_lqr_solution(const AffineParametrization&, const Vector&,
                                                const Matrix&, const Matrix&, PolicyCache&);
  double recompute_tolerance_;
  std::optional<Vector> theta_;
  RiccatiSolution solution_;
  int solves_ = 0;
};

/// DARE solution for (A(theta_hat), B(theta_hat)), through the cache.
/// DARE failures are rethrown with theta_hat in the message.
const RiccatiSolution& ce_lqr_solution(const AffineParametrization& par, const Vector& theta_hat,
                                       const Matrix& Q, const Matrix& R, PolicyCache& cache);

/// K_LQR(theta_hat).
Matrix ce_lqr_gain(const AffineParametrization& par, const Vector& theta_hat, const Matrix& Q,
                   const Matrix& R, PolicyCache& cache);

/// u = K x
Vector apply_policy(const Matrix& K, const Vector& x);

/// Uniform grid with `per_dim` points per axis (endpoints included), first
/// coordinate varying fastest.
std::vector<Vector> box_grid(const ParamBox& box, int per_dim);

/// Lower estimate of the Lipschitz constant of theta -> K_LQR(theta) over the
/// box: the largest ||K(a) - K(b)|| / ||a - b|| over axis-adjacent grid
/// pairs. DARE solves run on `threads` workers (0 = hardware concurrency).
double estimate_gain_lipschitz(const AffineParametrization& par, const ParamBox& box,
                               const Matrix& Q, const Matrix& R, int grid_per_dim,
                               unsigned threads = 0);

}  // namespace aclqr

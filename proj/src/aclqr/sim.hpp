#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aclqr/error.hpp"
#include "aclqr/model.hpp"
#include "aclqr/plant.hpp"

namespace aclqr {

enum class PlantKind { kQuadrotorNonlinear, kQuadrotorLinear, kGenericLinear };

/// adaptive: LMS + certainty-equivalent LQR every step.
/// frozen:   K_LQR(theta_hat_0) forever, no estimation.
/// oracle:   theta_hat_k = theta_k (true parameter revealed).
enum class PolicyMode { kAdaptive, kFrozen, kOracle };

const char* to_string(PlantKind kind);
const char* to_string(PolicyMode mode);

struct SimConfig {
  PlantKind plant = PlantKind::kQuadrotorNonlinear;
  QuadrotorParams quadrotor;
  /// For quadrotor plants this must equal quadrotor_parametrization(quadrotor).
  AffineParametrization par;
  ParamBox box;
  int horizon = 1;
  Vector x0;
  Vector theta_hat0;
  double mu = 1.0;
  Matrix Q;
  Matrix R;
  ParamTrajectory theta_traj;
  /// Quadrotor plants: actuation disturbance (w_z, w_psi), dim 2.
  /// Generic plants: additive state disturbance, dim n.
  DisturbanceModel disturbance;
  /// Per-input standard deviation of the exploration noise added to Kx.
  std::optional<Vector> exploration_std;
  PolicyMode mode = PolicyMode::kAdaptive;
  std::uint64_t seed = 0;
  double divergence_threshold = 1e6;
  double recompute_tolerance = 0.0;

  /// Throws Error(kInvalidArgument) describing the first inconsistency.
  void validate() const;
};

/// Seed of the exploration-noise stream; the disturbance stream uses `seed`.
std::uint64_t exploration_seed(std::uint64_t seed);

/// Per-step record of a closed-loop run with T transitions.
///   x, theta, theta_hat, V:      k = 0..T
///   u, w, e1, stepsize_ok:       k = 0..T-1
/// w is the additive disturbance in x+ = A(theta)x + B(theta)u + w. On the
/// nonlinear quadrotor it is the linearized-model term Ts(0,0,0,theta_1,w_z,w_psi)
/// so e1 absorbs the nonlinear remainder. V_k = x_k' P(theta_hat_k) x_k.
/// stepsize_ok_k records mu ||D(x_k,u_k)||^2 <= 1.
struct TrajectoryLog {
  Index n = 0, m = 0, p = 0;
  std::vector<Vector> x;
  std::vector<Vector> theta;
  std::vector<Vector> theta_hat;
  std::vector<double> V;
  std::vector<Vector> u;
  std::vector<Vector> w;
  std::vector<Vector> e1;
  std::vector<bool> stepsize_ok;
  bool diverged = false;

  std::size_t steps() const { return u.size(); }

  /// Transitions [begin, end) with states begin..end.
  TrajectoryLog slice(std::size_t begin, std::size_t end) const;

  /// Throws Error(kInvalidArgument) if array lengths or dimensions disagree.
  void validate_shape() const;
};

/// Runs the certainty-equivalent adaptive LQR loop: K_k from theta_hat_k,
/// u_k = K_k x_k (+ exploration), plant step, then the projected LMS update.
/// Stops early with `diverged` set once ||x|| exceeds the divergence threshold.
TrajectoryLog run(const SimConfig& config);

struct BatchResult {
  std::optional<TrajectoryLog> log;
  std::string error;
  ErrorKind error_kind = ErrorKind::kNumerical;
};

/// Independent runs on worker threads; per-run failures are collected.
std::vector<BatchResult> run_batch(const std::vector<SimConfig>& configs, unsigned threads = 0);

}  // namespace aclqr

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aclqr/linalg.hpp"
#include "aclqr/model.hpp"

namespace aclqr {

// ---------------------------------------------------------------------------
// Planar quadrotor
//
// State x = (p_x, p_z, psi, v_x, v_z, omega): positions, pitch, body-frame
// velocities, pitch rate. Input u = deviation of the two rotor thrusts from
// hover u_eq = (m g / 2) (1, 1). Parameter theta = (horizontal wind force,
// inverse moment of inertia). Continuous-time model:
//
//   p_x'   = v_x cos(psi) - v_z sin(psi)
//   p_z'   = v_x sin(psi) + v_z cos(psi)
//   psi'   = omega
//   v_x'   = v_z omega - g sin(psi) + theta_1 cos(psi)
//   v_z'   = -v_x omega - g cos(psi) - theta_1 sin(psi) + (u_1 + u_2 + m g) / m + w_z
//   omega' = l theta_2 (u_1 - u_2) + w_psi
//
// discretized with forward Euler at step Ts.
// ---------------------------------------------------------------------------

struct QuadrotorParams {
  double g = 9.81;
  double mass = 0.5;
  double arm = 0.25;
  double Ts = 0.1;

  void validate() const;
};

/// A(theta), B(theta) of the Euler-discretized linearization about hover.
AffineParametrization quadrotor_parametrization(const QuadrotorParams& qp);

/// One Euler step of the nonlinear model, written as
/// A(theta) x + B(theta) u + w_nl(x, u, theta, w_act). w_act = (w_z, w_psi).
Vector quadrotor_step_nonlinear(const QuadrotorParams& qp, const Vector& x, const Vector& u,
                                const Vector& theta, const Vector& w_act);

/// A(theta) x + B(theta) u + w_lin.
Vector quadrotor_step_linear(const QuadrotorParams& qp, const Vector& x, const Vector& u,
                             const Vector& theta, const Vector& w_lin);

/// w_lin = Ts (0, 0, 0, theta_1, w_z, w_psi): the additive term of the
/// linearized model (wind force plus actuation disturbance).
Vector quadrotor_linear_disturbance(const QuadrotorParams& qp, const Vector& theta,
                                    const Vector& w_act);

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/// std::mt19937_64 (its output sequence is fixed by the C++ standard) with
/// explicitly specified sampling so that streams are reproducible across
/// standard libraries:
///   uniform01  = (next >> 11) * 2^-53, in [0, 1)
///   gaussian   = Box-Muller on (1 - uniform01, uniform01); both outputs of a
///                pair are used, cosine branch first.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double gaussian();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Parameter trajectories
// ---------------------------------------------------------------------------

enum class TrajectoryKind { kConstant, kDecaying, kSquareWave, kCustom };

/// theta_k = base, except that `component` carries
///   decaying:    base + amplitude * exp(-decay k) * square(k)
///   square_wave: base + amplitude * square(k)
/// with square(k) = +1 on the first half of each period and -1 on the second.
/// Custom sequences are held at their last value. Every value is clipped to
/// the parameter box.
struct ParamTrajectory {
  TrajectoryKind kind = TrajectoryKind::kConstant;
  Vector base;
  Index component = 0;
  double amplitude = 5.0;
  double decay = 0.002;
  int period = 200;
  std::vector<Vector> sequence;
};

Vector parameter_profile(const ParamTrajectory& traj, const ParamBox& box, long k);

// ---------------------------------------------------------------------------
// Disturbances
// ---------------------------------------------------------------------------

enum class DisturbanceKind { kNone, kUniformDecaying, kUniformConstant, kCustom };

/// Componentwise-bounded disturbance of dimension `dim`:
///   uniform_decaying: U[-1,1] * amplitude * exp(-decay k) per component
///   uniform_constant: U[-1,1] * amplitude per component
///   custom:           sequence[k], zero past its end
struct DisturbanceModel {
  DisturbanceKind kind = DisturbanceKind::kNone;
  Index dim = 1;
  double amplitude = 1.0;
  double decay = 0.001;
  std::vector<Vector> sequence;

  /// Declared bound on |w_i| for every component and step.
  double componentwise_bound() const;
};

Vector disturbance(const DisturbanceModel& model, long k, Rng& rng);

}  // namespace aclqr

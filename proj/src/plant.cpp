#include "aclqr/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aclqr/error.hpp"

namespace aclqr {

void QuadrotorParams::validate() const {
  require(g > 0.0 && mass > 0.0 && arm > 0.0 && Ts > 0.0,
          "quadrotor: g, mass, arm and Ts must be positive");
}

AffineParametrization quadrotor_parametrization(const QuadrotorParams& qp) {
  qp.validate();
  const double Ts = qp.Ts;
  Matrix A0 = Matrix::Identity(6, 6);
  A0(0, 3) = Ts;
  A0(1, 4) = Ts;
  A0(2, 5) = Ts;
  A0(3, 2) = -qp.g * Ts;

  Matrix A_wind = Matrix::Zero(6, 6);
  A_wind(4, 2) = -Ts;
  Matrix A_inertia = Matrix::Zero(6, 6);

  Matrix B0 = Matrix::Zero(6, 2);
  B0(4, 0) = Ts / qp.mass;
  B0(4, 1) = Ts / qp.mass;

  Matrix B_wind = Matrix::Zero(6, 2);
  Matrix B_inertia = Matrix::Zero(6, 2);
  B_inertia(5, 0) = Ts * qp.arm;
  B_inertia(5, 1) = -Ts * qp.arm;

  return AffineParametrization(std::move(A0), {A_wind, A_inertia}, std::move(B0),
                               {B_wind, B_inertia});
}

namespace {

void check_quadrotor_dims(const Vector& x, const Vector& u, const Vector& theta) {
  require(x.size() == 6 && u.size() == 2 && theta.size() == 2,
          "quadrotor: expected x in R^6, u in R^2, theta in R^2");
}

Vector linear_part(const QuadrotorParams& qp, const Vector& x, const Vector& u,
                   const Vector& theta) {
  const double Ts = qp.Ts;
  Vector next = x;
  next(0) += Ts * x(3);
  next(1) += Ts * x(4);
  next(2) += Ts * x(5);
  next(3) += -qp.g * Ts * x(2);
  next(4) += -theta(0) * Ts * x(2) + Ts / qp.mass * (u(0) + u(1));
  next(5) += Ts * qp.arm * theta(1) * (u(0) - u(1));
  return next;
}

}  // namespace

Vector quadrotor_step_nonlinear(const QuadrotorParams& qp, const Vector& x, const Vector& u,
                                const Vector& theta, const Vector& w_act) {
  check_quadrotor_dims(x, u, theta);
  require(w_act.size() == 2, "quadrotor: actuation disturbance must be in R^2");
  const double Ts = qp.Ts;
  const double psi = x(2), vx = x(3), vz = x(4), omega = x(5);
  const double c = std::cos(psi), s = std::sin(psi);
  // [1/m 1/m] u_eq = g
  const double hover = qp.g;

  Vector w_nl(6);
  w_nl(0) = vx * (c - 1.0) - vz * s;
  w_nl(1) = vx * s + vz * (c - 1.0);
  w_nl(2) = 0.0;
  w_nl(3) = vz * omega - qp.g * s + theta(0) * c + qp.g * psi;
  w_nl(4) = -vx * omega - qp.g * c - theta(0) * s + w_act(0) + theta(0) * psi + hover;
  w_nl(5) = w_act(1);
  return linear_part(qp, x, u, theta) + Ts * w_nl;
}

Vector quadrotor_linear_disturbance(const QuadrotorParams& qp, const Vector& theta,
                                    const Vector& w_act) {
  require(theta.size() == 2 && w_act.size() == 2, "quadrotor: theta and w_act must be in R^2");
  Vector w = Vector::Zero(6);
  w(3) = qp.Ts * theta(0);
  w(4) = qp.Ts * w_act(0);
  w(5) = qp.Ts * w_act(1);
  return w;
}

Vector quadrotor_step_linear(const QuadrotorParams& qp, const Vector& x, const Vector& u,
                             const Vector& theta, const Vector& w_lin) {
  check_quadrotor_dims(x, u, theta);
  require(w_lin.size() == 6, "quadrotor: w_lin must be in R^6");
  return linear_part(qp, x, u, theta) + w_lin;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Vector parameter_profile(const ParamTrajectory& traj, const ParamBox& box, long k) {
  require(k >= 0, "parameter_profile: k must be nonnegative");
  if (traj.kind == TrajectoryKind::kCustom) {
    require(!traj.sequence.empty(), "parameter_profile: custom sequence is empty");
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(k), traj.sequence.size() - 1);
    return box.project(traj.sequence[idx]);
  }
  require(traj.base.size() == box.dim(), "parameter_profile: base has wrong dimension");
  Vector theta = traj.base;
  if (traj.kind != TrajectoryKind::kConstant) {
    require(traj.period >= 2, "parameter_profile: period must be at least 2");
    require(traj.component >= 0 && traj.component < box.dim(),
            "parameter_profile: component out of range");
    const double square = (k % traj.period) < traj.period / 2 ? 1.0 : -1.0;
    double amp = traj.amplitude;
    if (traj.kind == TrajectoryKind::kDecaying) amp *= std::exp(-traj.decay * static_cast<double>(k));
    theta(traj.component) += amp * square;
  }
  return box.project(theta);
}

double DisturbanceModel::componentwise_bound() const {
  switch (kind) {
    case DisturbanceKind::kNone:
      return 0.0;
    case DisturbanceKind::kUniformDecaying:
    case DisturbanceKind::kUniformConstant:
      return std::abs(amplitude);
    case DisturbanceKind::kCustom: {
      double b = 0.0;
      for (const auto& w : sequence) b = std::max(b, w.cwiseAbs().maxCoeff());
      return b;
    }
  }
  return 0.0;
}

Vector disturbance(const DisturbanceModel& model, long k, Rng& rng) {
  require(k >= 0, "disturbance: k must be nonnegative");
  Vector w = Vector::Zero(model.dim);
  switch (model.kind) {
    case DisturbanceKind::kNone:
      break;
    case DisturbanceKind::kUniformDecaying: {
      const double scale = model.amplitude * std::exp(-model.decay * static_cast<double>(k));
      for (Index i = 0; i < model.dim; ++i) w(i) = scale * rng.uniform(-1.0, 1.0);
      break;
    }
    case DisturbanceKind::kUniformConstant:
      for (Index i = 0; i < model.dim; ++i) w(i) = model.amplitude * rng.uniform(-1.0, 1.0);
      break;
    case DisturbanceKind::kCustom:
      if (static_cast<std::size_t>(k) < model.sequence.size()) {
        require(model.sequence[k].size() == model.dim,
                "disturbance: custom entry has wrong dimension");
        w = model.sequence[k];
      }
      break;
  }
  return w;
}

}  // namespace aclqr

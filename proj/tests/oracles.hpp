#pragma once

// Independent reference computations used by the tests. None of these call
// into the library code they are compared against.

#include <cmath>
#include <random>

#include "aclqr/linalg.hpp"
#include "aclqr/model.hpp"
#include "aclqr/plant.hpp"
#include "aclqr/sim.hpp"

namespace oracle {

using aclqr::Index;
using aclqr::Matrix;
using aclqr::Vector;

inline Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      for (Index k = 0; k < B.rows(); ++k)
        for (Index l = 0; l < B.cols(); ++l) K(i * B.rows() + k, j * B.cols() + l) = A(i, j) * B(k, l);
  return K;
}

/// Column-stacking vec written element by element.
inline Vector vec(const Matrix& M) {
  Vector v(M.size());
  Index idx = 0;
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < M.rows(); ++i) v(idx++) = M(i, j);
  return v;
}

/// Riccati value iteration P <- A'PA - A'PB (R + B'PB)^{-1} B'PA + Q from
/// P = Q until the update stalls.
inline Matrix dare_value_iteration(const Matrix& A, const Matrix& B, const Matrix& Q,
                                   const Matrix& R, int max_iter = 200000) {
  Matrix P = Q;
  for (int it = 0; it < max_iter; ++it) {
    const Matrix S = R + B.transpose() * P * B;
    const Matrix G = B.transpose() * P * A;
    Matrix next = A.transpose() * P * A - G.transpose() * S.ldlt().solve(G) + Q;
    next = 0.5 * (next + next.transpose());
    const double change = (next - P).norm();
    P = next;
    if (change <= 1e-15 * (1.0 + P.norm())) break;
  }
  return P;
}

inline Matrix gain_from(const Matrix& A, const Matrix& B, const Matrix& R, const Matrix& P) {
  const Matrix S = R + B.transpose() * P * B;
  return -S.ldlt().solve(B.transpose() * P * A);
}

inline Matrix random_matrix(std::mt19937_64& gen, Index r, Index c, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix M(r, c);
  for (Index i = 0; i < M.size(); ++i) M.data()[i] = nd(gen);
  return M;
}

/// Random (A, B) whose controllability matrix is well conditioned, with A
/// scaled to spectral radius `radius`.
inline std::pair<Matrix, Matrix> random_stabilizable(std::mt19937_64& gen, Index n, Index m,
                                                     double radius) {
  while (true) {
    Matrix A = random_matrix(gen, n, n);
    const double rho = A.eigenvalues().cwiseAbs().maxCoeff();
    A *= radius / rho;
    const Matrix B = random_matrix(gen, n, m);
    Matrix C(n, n * m);
    Matrix Ak = Matrix::Identity(n, n);
    for (Index k = 0; k < n; ++k) {
      C.middleCols(k * m, m) = Ak * B;
      Ak = A * Ak;
    }
    Eigen::JacobiSVD<Matrix> svd(C);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) > 1e-2 * s(0)) return {A, B};
  }
}

/// Forward-Euler step of the continuous-time planar quadrotor
///   p_x'   = v_x cos psi - v_z sin psi
///   p_z'   = v_x sin psi + v_z cos psi
///   psi'   = omega
///   v_x'   = v_z omega - g sin psi + theta_1 cos psi
///   v_z'   = -v_x omega - g cos psi - theta_1 sin psi + (u_1 + u_2 + m g)/m + w_z
///   omega' = l theta_2 (u_1 - u_2) + w_psi
inline Vector quadrotor_euler(double g, double m, double l, double Ts, const Vector& x,
                              const Vector& u, const Vector& theta, const Vector& w) {
  const double psi = x(2), vx = x(3), vz = x(4), om = x(5);
  Vector f(6);
  f(0) = vx * std::cos(psi) - vz * std::sin(psi);
  f(1) = vx * std::sin(psi) + vz * std::cos(psi);
  f(2) = om;
  f(3) = vz * om - g * std::sin(psi) + theta(0) * std::cos(psi);
  f(4) = -vx * om - g * std::cos(psi) - theta(0) * std::sin(psi) + (u(0) + u(1) + m * g) / m + w(0);
  f(5) = l * theta(1) * (u(0) - u(1)) + w(1);
  return x + Ts * f;
}

/// x+ = [[1, Ts], [t1, 1]] x + [0; t2] u: a two-state parametrization used
/// by the fuzz tests alongside the quadrotor.
inline aclqr::AffineParametrization toy_parametrization(double Ts = 0.1) {
  Matrix A0(2, 2);
  A0 << 1, Ts, 0, 1;
  Matrix A1 = Matrix::Zero(2, 2);
  A1(1, 0) = 1.0;
  const Matrix A2 = Matrix::Zero(2, 2);
  const Matrix B0 = Matrix::Zero(2, 1);
  const Matrix B1 = Matrix::Zero(2, 1);
  Matrix B2 = Matrix::Zero(2, 1);
  B2(1, 0) = 1.0;
  return aclqr::AffineParametrization(A0, {A1, A2}, B0, {B1, B2});
}

inline Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

/// A quadrotor-linear adaptive configuration in the style of the reference
/// experiments, with a short horizon.
inline aclqr::SimConfig quadrotor_linear_config(int T, std::uint64_t seed) {
  aclqr::SimConfig c;
  c.plant = aclqr::PlantKind::kQuadrotorLinear;
  c.par = aclqr::quadrotor_parametrization(c.quadrotor);
  c.box = aclqr::ParamBox(vec2(-10, 50), vec2(10, 500));
  c.horizon = T;
  c.x0 = Vector::Zero(6);
  c.x0(0) = -2;
  c.x0(1) = -2;
  c.theta_hat0 = vec2(0, 100);
  c.mu = 50;
  c.Q = Matrix::Identity(6, 6);
  c.R = 10 * Matrix::Identity(2, 2);
  c.theta_traj.kind = aclqr::TrajectoryKind::kDecaying;
  c.theta_traj.base = vec2(0, 250);
  c.disturbance.kind = aclqr::DisturbanceKind::kUniformDecaying;
  c.disturbance.dim = 2;
  c.seed = seed;
  return c;
}

}  // namespace oracle

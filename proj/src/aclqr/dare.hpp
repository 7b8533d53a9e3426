#pragma once

#include "aclqr/linalg.hpp"
#include "aclqr/model.hpp"

namespace aclqr {

struct DareOptions {
  /// Accept when ||residual||_F <= tolerance * (1 + ||P||_F).
  double tolerance = 1e-10;
  int max_doubling_steps = 200;
  int max_fixed_point_steps = 20000;
  int max_newton_steps = 100;
};

enum class DareMethod { kDoubling, kNewton };

/// Stabilizing solution of
///   P = A'PA - A'PB (R + B'PB)^{-1} B'PA + Q
/// together with the LQR gain K = -(R + B'PB)^{-1} B'PA (u = Kx).
struct RiccatiSolution {
  Matrix P;
  Matrix K;
  double residual = 0.0;  // Frobenius norm of the DARE residual
  int iterations = 0;
  DareMethod method = DareMethod::kDoubling;
};

/// Solves the DARE by structure-preserving doubling. If doubling breaks down
/// or misses the tolerance, a stabilizing gain is obtained by value iteration
/// and refined with Kleinman-Newton steps.
///
/// Throws Error(kInvalidArgument) when Q or R is not symmetric positive
/// definite or the dimensions disagree, and DareError when no stabilizing
/// solution was reached (typically an unstabilizable pair).
RiccatiSolution solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                           const DareOptions& options = {});

/// Frobenius norm of P - (A'PA - A'PB (R+B'PB)^{-1} B'PA + Q).
double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                     const Matrix& P);

/// K = -(R + B'PB)^{-1} B'PA
Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& R, const Matrix& P);

/// d vec(P) / d vec(A) (n^2 x n^2) and d vec(P) / d vec(B) (n^2 x nm).
struct RiccatiJacobians {
  Matrix dP_dA;
  Matrix dP_dB;
};

/// The building blocks of the Jacobians: Z1 in its expanded form and in its
/// closed-loop form I - (A+BK)' (x) (A+BK)', plus Z2 and Z3.
struct RiccatiSensitivity {
  Matrix Z1;
  Matrix Z1_closed_loop;
  Matrix Z2;
  Matrix Z3;
};

RiccatiSensitivity riccati_sensitivity(const Matrix& A, const Matrix& B, const Matrix& R,
                                       const RiccatiSolution& sol);

/// Closed-form Riccati sensitivities Z1^{-1} Z2 and Z1^{-1} Z3.
/// Throws Error(kNumerical) "closed loop marginally stable" when Z1 has
/// condition number above 1e12.
RiccatiJacobians riccati_jacobians(const Matrix& A, const Matrix& B, const Matrix& Q,
                                   const Matrix& R, const RiccatiSolution& sol);

/// d vec(K) / d theta by central differences: column i is
/// (vec K(theta + h e_i) - vec K(theta - h e_i)) / 2h.
Matrix gain_jacobian_fd(const AffineParametrization& par, const Vector& theta,
                        const Matrix& Q, const Matrix& R, double h);

/// d vec(K) / d theta chained through riccati_jacobians and the definition of
/// K. Used to cross-check gain_jacobian_fd.
Matrix gain_jacobian_analytic(const AffineParametrization& par, const Vector& theta,
                              const Matrix& Q, const Matrix& R);

}  // namespace aclqr

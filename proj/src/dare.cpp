#include "aclqr/dare.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>

#include "aclqr/error.hpp"

namespace aclqr {
namespace {

void validate_inputs(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  const Index n = A.rows();
  require(n >= 1 && A.cols() == n, "solve_dare: A must be square");
  require(B.rows() == n && B.cols() >= 1, "solve_dare: B must have n rows");
  require(Q.rows() == n && Q.cols() == n, "solve_dare: Q must be n x n");
  require(R.rows() == B.cols() && R.cols() == B.cols(), "solve_dare: R must be m x m");
  require(all_finite(A) && all_finite(B), "solve_dare: A and B must be finite");
  require(is_positive_definite(Q), "solve_dare: Q must be symmetric positive definite");
  require(is_positive_definite(R), "solve_dare: R must be symmetric positive definite");
}

bool accepted(double residual, const Matrix& P, double tol) {
  return std::isfinite(residual) && residual <= tol * (1.0 + P.norm());
}

bool stabilizing(const Matrix& A, const Matrix& B, const Matrix& K) {
  return all_finite(K) && spectral_radius(A + B * K) < 1.0;
}

// Solves P = Acl' P Acl + W for Schur-stable Acl via the Kronecker form.
Matrix solve_discrete_lyapunov(const Matrix& Acl, const Matrix& W) {
  const Index n = Acl.rows();
  const Matrix lhs = Matrix::Identity(n * n, n * n) - kron(Acl.transpose(), Acl.transpose());
  const Vector p = lhs.partialPivLu().solve(vec(W));
  return symmetrize(unvec(p, n, n));
}

struct Candidate {
  Matrix P;
  Matrix K;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

// Structure-preserving doubling: A_k, G_k, H_k with H_k -> P.
Candidate doubling(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                   const DareOptions& opt) {
  const Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  Matrix Ak = A;
  Matrix G = symmetrize(B * R.llt().solve(B.transpose()));
  Matrix H = Q;
  Candidate c;
  for (int k = 1; k <= opt.max_doubling_steps; ++k) {
    c.iterations = k;
    const Eigen::PartialPivLU<Matrix> W(I + G * H);
    const Matrix V1 = W.solve(Ak);
    const Matrix V2 = W.solve(G.transpose()).transpose();
    G = symmetrize(G + Ak * V2 * Ak.transpose());
    const Matrix H_next = symmetrize(H + V1.transpose() * H * Ak);
    Ak = Ak * V1;
    if (!all_finite(H_next) || !all_finite(G) || !all_finite(Ak)) {
      c.P = H_next;
      return c;
    }
    const double change = (H_next - H).norm();
    H = H_next;
    if (change <= 1e-14 * H.norm()) break;
  }
  c.P = H;
  c.K = lqr_gain(A, B, R, c.P);
  c.residual = dare_residual(A, B, Q, R, c.P);
  return c;
}

// Kleinman-Newton refinement from a stabilizing gain.
Candidate newton(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, Matrix K,
                 const DareOptions& opt) {
  Candidate c;
  for (int k = 1; k <= opt.max_newton_steps; ++k) {
    c.iterations = k;
    const Matrix Acl = A + B * K;
    if (spectral_radius(Acl) >= 1.0) break;
    c.P = solve_discrete_lyapunov(Acl, Q + K.transpose() * R * K);
    K = lqr_gain(A, B, R, c.P);
    c.K = K;
    c.residual = dare_residual(A, B, Q, R, c.P);
    if (!std::isfinite(c.residual) || accepted(c.residual, c.P, opt.tolerance)) break;
  }
  return c;
}

// Value iteration from P = Q until the induced gain stabilizes (A, B).
Matrix stabilizing_gain_by_iteration(const Matrix& A, const Matrix& B, const Matrix& Q,
                                     const Matrix& R, const DareOptions& opt,
                                     double& last_residual) {
  Matrix P = Q;
  for (int k = 0; k < opt.max_fixed_point_steps; ++k) {
    const Matrix K = lqr_gain(A, B, R, P);
    if (!all_finite(K)) break;
    if (stabilizing(A, B, K)) return K;
    P = symmetrize(Q + A.transpose() * P * (A + B * K));
    if (!all_finite(P)) break;
  }
  last_residual = all_finite(P) ? dare_residual(A, B, Q, R, P)
                                : std::numeric_limits<double>::infinity();
  return {};
}

bool valid(const Candidate& c, const Matrix& A, const Matrix& B, const DareOptions& opt) {
  return c.P.size() > 0 && all_finite(c.P) && accepted(c.residual, c.P, opt.tolerance) &&
         stabilizing(A, B, c.K) && min_eigenvalue(c.P) > 0.0;
}

}  // namespace

Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& R, const Matrix& P) {
  const Matrix M3 = R + B.transpose() * P * B;
  return -M3.llt().solve(B.transpose() * P * A);
}

double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                     const Matrix& P) {
  const Matrix M3 = R + B.transpose() * P * B;
  const Matrix BtPA = B.transpose() * P * A;
  const Matrix rhs =
      A.transpose() * P * A - BtPA.transpose() * M3.llt().solve(BtPA) + Q;
  return (P - rhs).norm();
}

RiccatiSolution solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                           const DareOptions& options) {
  validate_inputs(A, B, Q, R);

  Candidate c = doubling(A, B, Q, R, options);
  DareMethod method = DareMethod::kDoubling;
  double last_residual = c.residual;
  int total_iterations = c.iterations;

  if (!valid(c, A, B, options)) {
    Matrix K0;
    if (c.K.size() > 0 && stabilizing(A, B, c.K)) {
      K0 = c.K;
    } else {
      K0 = stabilizing_gain_by_iteration(A, B, Q, R, options, last_residual);
    }
    if (K0.size() > 0) {
      c = newton(A, B, Q, R, K0, options);
      method = DareMethod::kNewton;
      total_iterations += c.iterations;
      last_residual = c.residual;
    }
    if (K0.size() == 0 || !valid(c, A, B, options)) {
      std::ostringstream msg;
      msg << "DARE did not converge (last residual " << last_residual
          << "); the pair (A, B) may not be stabilizable";
      throw DareError(msg.str(), last_residual);
    }
  }

  RiccatiSolution sol;
  sol.P = symmetrize(c.P);
  sol.K = lqr_gain(A, B, R, sol.P);
  sol.residual = dare_residual(A, B, Q, R, sol.P);
  sol.iterations = total_iterations;
  sol.method = method;
  return sol;
}

RiccatiSensitivity riccati_sensitivity(const Matrix& A, const Matrix& B, const Matrix& R,
                                       const RiccatiSolution& sol) {
  const Index n = A.rows();
  const Index m = B.cols();
  const Matrix& P = sol.P;
  const Matrix In = Matrix::Identity(n, n);
  const Matrix In2 = Matrix::Identity(n * n, n * n);
  const Matrix Im = Matrix::Identity(m, m);
  const Matrix Im2 = Matrix::Identity(m * m, m * m);
  const Matrix Vnn = vec_permutation(n, n);
  const Matrix Vmm = vec_permutation(m, m);

  const Matrix M3 = R + B.transpose() * P * B;
  const Matrix M2 = M3.inverse();
  const Matrix M1 = P - P * B * M2 * B.transpose() * P;
  const Matrix PB = P * B;
  const Matrix PBM2Bt = PB * M2 * B.transpose();
  const Matrix AtA = kron(A.transpose(), A.transpose());
  const Matrix PBxPB_M2xM2 = kron(PB, PB) * kron(M2, M2);

  RiccatiSensitivity s;
  s.Z1 = In2 - AtA * (In2 - kron(PBM2Bt, In) - kron(In, PBM2Bt) +
                      PBxPB_M2xM2 * kron(B.transpose(), B.transpose()));
  const Matrix Acl = A + B * sol.K;
  s.Z1_closed_loop = In2 - kron(Acl.transpose(), Acl.transpose());
  s.Z2 = (Vnn + In2) * kron(In, A.transpose() * M1);
  s.Z3 = AtA * (PBxPB_M2xM2 * (Im2 + Vmm) * kron(Im, B.transpose() * P) -
                (In2 + Vnn) * kron(PB * M2, P));
  return s;
}

RiccatiJacobians riccati_jacobians(const Matrix& A, const Matrix& B, const Matrix& Q,
                                   const Matrix& R, const RiccatiSolution& sol) {
  validate_inputs(A, B, Q, R);
  require(sol.P.rows() == A.rows() && sol.P.cols() == A.rows(),
          "riccati_jacobians: solution does not match A");
  const RiccatiSensitivity s = riccati_sensitivity(A, B, R, sol);

  Eigen::JacobiSVD<Matrix> svd(s.Z1);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) {
    throw Error(ErrorKind::kNumerical,
                "riccati_jacobians: closed loop marginally stable (cond(Z1) = " +
                    std::to_string(cond) + ")");
  }
  const Eigen::PartialPivLU<Matrix> lu(s.Z1);
  return {lu.solve(s.Z2), lu.solve(s.Z3)};
}

Matrix gain_jacobian_fd(const AffineParametrization& par, const Vector& theta,
                        const Matrix& Q, const Matrix& R, double h) {
  require(h > 0.0 && std::isfinite(h), "gain_jacobian_fd: step h must be positive");
  require(theta.size() == par.p(), "gain_jacobian_fd: theta has wrong dimension");
  Matrix J(par.m() * par.n(), par.p());
  for (Index i = 0; i < par.p(); ++i) {
    Vector plus = theta, minus = theta;
    plus(i) += h;
    minus(i) -= h;
    const SystemMatrices sp = eval_system(par, plus);
    const SystemMatrices sm = eval_system(par, minus);
    const Matrix Kp = solve_dare(sp.A, sp.B, Q, R).K;
    const Matrix Km = solve_dare(sm.A, sm.B, Q, R).K;
    J.col(i) = (vec(Kp) - vec(Km)) / (2.0 * h);
  }
  return J;
}

Matrix gain_jacobian_analytic(const AffineParametrization& par, const Vector& theta,
                              const Matrix& Q, const Matrix& R) {
  const SystemMatrices sys = eval_system(par, theta);
  const Matrix& A = sys.A;
  const Matrix& B = sys.B;
  const RiccatiSolution sol = solve_dare(A, B, Q, R);
  const RiccatiJacobians jac = riccati_jacobians(A, B, Q, R, sol);
  const Matrix& P = sol.P;
  const Index n = par.n(), m = par.m();
  const Eigen::LLT<Matrix> M3(R + B.transpose() * P * B);

  Matrix J(m * n, par.p());
  for (Index i = 0; i < par.p(); ++i) {
    const Matrix& dA = par.A_incr()[i];
    const Matrix& dB = par.B_incr()[i];
    const Matrix dP = unvec(jac.dP_dA * vec(dA) + jac.dP_dB * vec(dB), n, n);
    // K = -M3^{-1} N with N = B'PA, M3 = R + B'PB.
    const Matrix dM3 = dB.transpose() * P * B + B.transpose() * dP * B + B.transpose() * P * dB;
    const Matrix dN = dB.transpose() * P * A + B.transpose() * dP * A + B.transpose() * P * dA;
    const Matrix dK = -M3.solve(dN + dM3 * sol.K);
    J.col(i) = vec(dK);
  }
  return J;
}

}  // namespace aclqr

#include <doctest.h>

#include <random>

#include "aclqr/dare.hpp"
#include "aclqr/error.hpp"
#include "aclqr/plant.hpp"
#include "oracles.hpp"

using namespace aclqr;
using oracle::vec2;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

struct Quad {
  Matrix A, B, Q, R;
};

Quad quadrotor_at(double wind, double inv_inertia) {
  const AffineParametrization par = quadrotor_parametrization(QuadrotorParams{});
  const SystemMatrices s = eval_system(par, vec2(wind, inv_inertia));
  return {s.A, s.B, Matrix::Identity(6, 6), 10.0 * Matrix::Identity(2, 2)};
}

void check_fd_jacobians(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  const RiccatiSolution sol = solve_dare(A, B, Q, R);
  const RiccatiJacobians J = riccati_jacobians(A, B, Q, R, sol);
  const Index n = A.rows(), m = B.cols();
  const double h = 1e-6 * std::max(1.0, A.norm());
  Matrix fdA(n * n, n * n), fdB(n * n, n * m);
  for (Index c = 0; c < n * n; ++c) {
    Matrix Ap = A, Am = A;
    Ap.data()[c] += h;
    Am.data()[c] -= h;
    fdA.col(c) = oracle::vec(oracle::dare_value_iteration(Ap, B, Q, R) -
                             oracle::dare_value_iteration(Am, B, Q, R)) / (2 * h);
  }
  for (Index c = 0; c < n * m; ++c) {
    Matrix Bp = B, Bm = B;
    Bp.data()[c] += h;
    Bm.data()[c] -= h;
    fdB.col(c) = oracle::vec(oracle::dare_value_iteration(A, Bp, Q, R) -
                             oracle::dare_value_iteration(A, Bm, Q, R)) / (2 * h);
  }
  CHECK((J.dP_dA - fdA).norm() <= 1e-5 * fdA.norm());
  CHECK((J.dP_dB - fdB).norm() <= 1e-5 * std::max(fdB.norm(), 1e-12));
}

}  // namespace

TEST_CASE("scalar DARE has the golden-ratio solution") {
  const RiccatiSolution s = solve_dare(scalar(1), scalar(1), scalar(1), scalar(1));
  CHECK(std::abs(s.P(0, 0) - (1.0 + std::sqrt(5.0)) / 2.0) <= 1e-9);
  CHECK(std::abs(s.K(0, 0) + (std::sqrt(5.0) - 1.0) / 2.0) <= 1e-9);
  CHECK(s.residual <= 1e-12);
}

TEST_CASE("scalar DARE agrees with the closed-form root for assorted coefficients") {
  // p = a^2 p - a^2 b^2 p^2 / (r + b^2 p) + q  rearranges to
  // b^2 p^2 + (r - a^2 r - q b^2) p - q r = 0.
  const double cases[][4] = {{0.5, 1, 1, 1}, {2, 1, 1, 1}, {1.2, 0.3, 2, 0.1}, {-3, 2, 0.5, 4}};
  for (const auto& c : cases) {
    const double a = c[0], b = c[1], q = c[2], r = c[3];
    const double qa = b * b, qb = r - a * a * r - q * b * b, qc = -q * r;
    const double p = (-qb + std::sqrt(qb * qb - 4 * qa * qc)) / (2 * qa);
    const RiccatiSolution s = solve_dare(scalar(a), scalar(b), scalar(q), scalar(r));
    CHECK(s.P(0, 0) == doctest::Approx(p).epsilon(1e-10));
    CHECK(std::abs(a + b * s.K(0, 0)) < 1.0);
  }
}

TEST_CASE("quadrotor DARE at the nominal parameter") {
  const Quad q = quadrotor_at(0, 250);
  const RiccatiSolution s = solve_dare(q.A, q.B, q.Q, q.R);
  CHECK(s.residual <= 1e-10);
  CHECK(dare_residual(q.A, q.B, q.Q, q.R, s.P) <= 1e-10 * (1.0 + s.P.norm()));
  CHECK(is_symmetric(s.P, 0.0));
  CHECK(is_positive_definite(s.P));
  CHECK(spectral_radius(q.A + q.B * s.K) < 1.0);
  CHECK((s.K - lqr_gain(q.A, q.B, q.R, s.P)).norm() <= 1e-12 * s.K.norm());

  const Matrix P_ref = oracle::dare_value_iteration(q.A, q.B, q.Q, q.R);
  CHECK((s.P - P_ref).norm() <= 1e-9 * P_ref.norm());
}

TEST_CASE("DARE matches value iteration on random stabilizable systems") {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 25; ++t) {
    const Index n = 1 + t % 5, m = 1 + t % 3;
    const double radius = 0.5 + 0.1 * (t % 12);  // includes open-loop unstable cases
    const auto [A, B] = oracle::random_stabilizable(gen, n, m, radius);
    const Matrix L = oracle::random_matrix(gen, n, n);
    const Matrix Q = L * L.transpose() + 0.1 * Matrix::Identity(n, n);
    const Matrix R = Matrix::Identity(m, m) * (0.5 + t % 3);
    const RiccatiSolution s = solve_dare(A, B, Q, R);
    const Matrix P_ref = oracle::dare_value_iteration(A, B, Q, R);
    CHECK((s.P - P_ref).norm() <= 1e-8 * P_ref.norm());
    CHECK((s.K - oracle::gain_from(A, B, R, P_ref)).norm() <= 1e-7 * (1.0 + s.K.norm()));
    CHECK(spectral_radius(A + B * s.K) < 1.0);
    CHECK(s.residual <= 1e-10 * (1.0 + s.P.norm()));
  }
}

TEST_CASE("DARE on a marginally controllable pair falls back or reports") {
  // Double integrator: controllable, A has eigenvalue 1 twice.
  Matrix A(2, 2), B(2, 1);
  A << 1, 1, 0, 1;
  B << 0, 1;
  const RiccatiSolution s = solve_dare(A, B, Matrix::Identity(2, 2), scalar(1));
  CHECK(spectral_radius(A + B * s.K) < 1.0);
  CHECK(s.residual <= 1e-10 * (1.0 + s.P.norm()));
}

TEST_CASE("unstabilizable pair raises a DARE error with the residual") {
  Matrix A(2, 2), B(2, 1);
  A << 2, 0, 0, 0.5;
  B << 0, 1;  // unstable mode is uncontrollable
  try {
    solve_dare(A, B, Matrix::Identity(2, 2), scalar(1));
    FAIL("expected DareError");
  } catch (const DareError& e) {
    CHECK(e.kind() == ErrorKind::kNumerical);
    CHECK(std::string(e.what()).find("DARE") != std::string::npos);
  }
}

TEST_CASE("DARE input validation") {
  const Matrix I2 = Matrix::Identity(2, 2);
  Matrix asym(2, 2);
  asym << 1, 1, 0, 1;
  CHECK_THROWS_AS(solve_dare(I2, Matrix::Ones(2, 1), asym, scalar(1)), Error);
  CHECK_THROWS_AS(solve_dare(I2, Matrix::Ones(2, 1), I2, scalar(0)), Error);
  CHECK_THROWS_AS(solve_dare(I2, Matrix::Ones(3, 1), I2, scalar(1)), Error);
  Matrix nan_a = I2;
  nan_a(0, 1) = std::nan("");
  CHECK_THROWS_AS(solve_dare(nan_a, Matrix::Ones(2, 1), I2, scalar(1)), Error);
}

TEST_CASE("Riccati Jacobians match central differences on random systems") {
  std::mt19937_64 gen(22);
  for (int t = 0; t < 10; ++t) {
    const Index n = 1 + t % 4, m = 1 + t % 2;
    const auto [A, B] = oracle::random_stabilizable(gen, n, m, 0.6 + 0.08 * t);
    check_fd_jacobians(A, B, Matrix::Identity(n, n), Matrix::Identity(m, m));
  }
}

TEST_CASE("Riccati Jacobians match central differences on the quadrotor") {
  const Quad q = quadrotor_at(0, 250);
  check_fd_jacobians(q.A, q.B, q.Q, q.R);
}

TEST_CASE("expanded and closed-loop forms of Z1 agree") {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 10; ++t) {
    const Index n = 1 + t % 4, m = 1 + t % 3;
    const auto [A, B] = oracle::random_stabilizable(gen, n, m, 0.9);
    const Matrix R = Matrix::Identity(m, m);
    const RiccatiSolution sol = solve_dare(A, B, Matrix::Identity(n, n), R);
    const RiccatiSensitivity S = riccati_sensitivity(A, B, R, sol);
    CHECK((S.Z1 - S.Z1_closed_loop).norm() <= 1e-10 * std::max(1.0, S.Z1.norm()));
    const Matrix Acl = A + B * sol.K;
    const Matrix expected = Matrix::Identity(n * n, n * n) - oracle::kron(Acl.transpose(), Acl.transpose());
    CHECK((S.Z1_closed_loop - expected).norm() <= 1e-12 * expected.norm());
  }
  const Quad q = quadrotor_at(5, 100);
  const RiccatiSensitivity S = riccati_sensitivity(q.A, q.B, q.R, solve_dare(q.A, q.B, q.Q, q.R));
  CHECK((S.Z1 - S.Z1_closed_loop).norm() <= 1e-10 * S.Z1.norm());
}

TEST_CASE("Jacobian refuses a marginally stable closed loop") {
  // A hand-made 'solution' whose closed loop has an eigenvalue on the unit circle.
  Matrix A(1, 1), B(1, 1);
  A << 1.0;
  B << 1.0;
  RiccatiSolution fake;
  fake.P = scalar(0.0);
  fake.K = scalar(0.0);  // the gain of P = 0, so A + BK = 1
  CHECK_THROWS_AS(riccati_jacobians(A, B, scalar(1), scalar(1), fake), Error);
}

TEST_CASE("gain Jacobian: analytic chain rule agrees with central differences") {
  const AffineParametrization par = quadrotor_parametrization(QuadrotorParams{});
  const Matrix Q = Matrix::Identity(6, 6), R = 10 * Matrix::Identity(2, 2);
  for (const Vector& theta : {vec2(0, 250), vec2(-8, 60), vec2(9, 480)}) {
    const Matrix ga = gain_jacobian_analytic(par, theta, Q, R);
    const Matrix gf = gain_jacobian_fd(par, theta, Q, R, 1e-4 * std::max(1.0, theta.norm()) * 1e-2);
    CHECK(ga.rows() == 12);
    CHECK(ga.cols() == 2);
    CHECK((ga - gf).norm() <= 1e-5 * gf.norm());
  }
}

#include <doctest.h>

#include <random>

#include "aclqr/error.hpp"
#include "aclqr/linalg.hpp"
#include "oracles.hpp"

using namespace aclqr;

TEST_CASE("vec stacks columns and unvec inverts it") {
  Matrix M(2, 3);
  M << 1, 2, 3, 4, 5, 6;
  Vector expected(6);
  expected << 1, 4, 2, 5, 3, 6;
  CHECK(vec(M) == expected);
  CHECK(unvec(vec(M), 2, 3) == M);
  CHECK_THROWS_AS(unvec(expected, 4, 2), Error);
}

TEST_CASE("kron matches the elementwise definition") {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix A = oracle::random_matrix(gen, 1 + t % 3, 1 + t % 4);
    const Matrix B = oracle::random_matrix(gen, 1 + t % 2, 2 + t % 3);
    CHECK((kron(A, B) - oracle::kron(A, B)).norm() == 0.0);
  }
}

TEST_CASE("vec(A X B) = (B' kron A) vec(X)") {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 20; ++t) {
    const Matrix A = oracle::random_matrix(gen, 3, 2);
    const Matrix X = oracle::random_matrix(gen, 2, 4);
    const Matrix B = oracle::random_matrix(gen, 4, 3);
    const Vector lhs = vec(A * X * B);
    const Vector rhs = kron(B.transpose(), A) * vec(X);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
  }
}

TEST_CASE("vec_permutation maps vec(A) to vec(A')") {
  std::mt19937_64 gen(3);
  for (Index n = 1; n <= 4; ++n) {
    for (Index m = 1; m <= 4; ++m) {
      const Matrix V = vec_permutation(n, m);
      const Matrix A = oracle::random_matrix(gen, n, m);
      CHECK((V * oracle::vec(A) - oracle::vec(A.transpose())).norm() == 0.0);
      CHECK((V.transpose() * V - Matrix::Identity(n * m, n * m)).norm() == 0.0);
    }
  }
  // V_{m,n} V_{n,m} = I and the swap identity V_{p,m} (A kron B) V_{n,q} = B kron A
  const Matrix A = oracle::random_matrix(gen, 2, 3);
  const Matrix B = oracle::random_matrix(gen, 4, 1);
  CHECK((vec_permutation(3, 2) * vec_permutation(2, 3) - Matrix::Identity(6, 6)).norm() == 0.0);
  const Matrix swapped = vec_permutation(4, 2) * kron(A, B) * vec_permutation(3, 1);
  CHECK((swapped - kron(B, A)).norm() <= 1e-14);
}

TEST_CASE("spectral norm and radius") {
  Matrix D = Matrix::Zero(3, 3);
  D.diagonal() << -4, 2, 1;
  CHECK(spectral_norm(D) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(spectral_radius(D) == doctest::Approx(4.0).epsilon(1e-14));

  Matrix rot(2, 2);
  rot << 0, -0.5, 0.5, 0;  // eigenvalues +-0.5i
  CHECK(spectral_radius(rot) == doctest::Approx(0.5).epsilon(1e-14));

  Matrix jordan(2, 2);
  jordan << 0.5, 10, 0, 0.5;
  CHECK(spectral_radius(jordan) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spectral_norm(jordan) > 10.0);

  std::mt19937_64 gen(4);
  for (int t = 0; t < 10; ++t) {
    const Matrix M = oracle::random_matrix(gen, 4, 3);
    const double via_gram = std::sqrt((M.transpose() * M).selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff());
    CHECK(spectral_norm(M) == doctest::Approx(via_gram).epsilon(1e-12));
    CHECK(spectral_radius(M.topRows(3)) <= spectral_norm(M.topRows(3)) + 1e-12);
  }
}

TEST_CASE("positive definiteness and symmetry predicates") {
  Matrix S(2, 2);
  S << 2, 1, 1, 2;
  CHECK(is_symmetric(S, 0.0));
  CHECK(is_positive_definite(S));
  CHECK(min_eigenvalue(S) == doctest::Approx(1.0));
  CHECK(max_eigenvalue(S) == doctest::Approx(3.0));

  Matrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_FALSE(is_positive_definite(indefinite));

  Matrix asym(2, 2);
  asym << 2, 1, 0, 2;
  CHECK_FALSE(is_symmetric(asym, 1e-12));
  CHECK_FALSE(is_positive_definite(asym));
  CHECK(is_symmetric(symmetrize(asym), 0.0));

  CHECK_FALSE(is_positive_definite(Matrix::Zero(2, 2)));
  CHECK_FALSE(is_positive_definite(Matrix(2, 3)));

  Matrix bad = S;
  bad(0, 0) = std::nan("");
  CHECK_FALSE(all_finite(bad));
  CHECK_FALSE(is_positive_definite(bad));
}

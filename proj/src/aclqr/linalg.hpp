#pragma once

// Dense helpers on top of Eigen. Storage is Eigen's default column-major
// order everywhere in the project, so vec() is a plain copy of the buffer and
// the vec-permutation identities below hold for column stacking.

#include <Eigen/Dense>

namespace aclqr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Column-stacking vectorization.
Vector vec(const Matrix& M);

/// Inverse of vec() for a rows x cols matrix.
Matrix unvec(const Vector& v, Index rows, Index cols);

Matrix kron(const Matrix& A, const Matrix& B);

/// The nm x nm permutation V with V * vec(A) = vec(A^T) for every n x m A.
Matrix vec_permutation(Index n, Index m);

/// Largest singular value (Jacobi SVD).
double spectral_norm(const Matrix& M);

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Matrix& M);

bool is_symmetric(const Matrix& M, double tol);

/// Symmetric (to tol, relative to the largest entry) and Cholesky-factorable.
bool is_positive_definite(const Matrix& M, double tol = 1e-10);

/// Extreme eigenvalues of a symmetric matrix.
double min_eigenvalue(const Matrix& S);
double max_eigenvalue(const Matrix& S);

bool all_finite(const Matrix& M);

/// (M + M^T) / 2
Matrix symmetrize(const Matrix& M);

}  // namespace aclqr

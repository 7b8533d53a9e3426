#include "aclqr/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "aclqr/error.hpp"

namespace aclqr {

Vector vec(const Matrix& M) {
  return Eigen::Map<const Vector>(M.data(), M.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  require(v.size() == rows * cols, "unvec: length does not match rows*cols");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index j = 0; j < A.cols(); ++j) {
    for (Index i = 0; i < A.rows(); ++i) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return out;
}

Matrix vec_permutation(Index n, Index m) {
  require(n >= 1 && m >= 1, "vec_permutation: dimensions must be positive");
  Matrix V = Matrix::Zero(n * m, n * m);
  // A(i,j) sits at i + j*n in vec(A) and at j + i*m in vec(A^T).
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) V(j + i * m, i + j * n) = 1.0;
  }
  return V;
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

double spectral_radius(const Matrix& M) {
  require(M.rows() == M.cols(), "spectral_radius: matrix must be square");
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_symmetric(const Matrix& M, double tol) {
  if (M.rows() != M.cols()) return false;
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_positive_definite(const Matrix& M, double tol) {
  if (M.rows() != M.cols() || M.size() == 0 || !all_finite(M)) return false;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (!is_symmetric(M, tol * scale)) return false;
  Eigen::LLT<Matrix> llt(symmetrize(M));
  return llt.info() == Eigen::Success && min_eigenvalue(M) > 0.0;
}

double min_eigenvalue(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

bool all_finite(const Matrix& M) { return M.allFinite(); }

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

}  // namespace aclqr

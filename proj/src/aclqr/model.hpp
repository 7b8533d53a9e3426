#pragma once

#include <vector>

#include "aclqr/linalg.hpp"

namespace aclqr {

/// theta -> (A(theta), B(theta)), affine in theta:
///   A(theta) = A0 + sum_i theta_i * A_incr[i]
///   B(theta) = B0 + sum_i theta_i * B_incr[i]
class AffineParametrization {
 public:
  AffineParametrization() = default;

  /// Validates dimensions and finiteness; throws Error on mismatch.
  AffineParametrization(Matrix A0, std::vector<Matrix> A_incr, Matrix B0,
                        std::vector<Matrix> B_incr);

  Index n() const { return A0_.rows(); }
  Index m() const { return B0_.cols(); }
  Index p() const { return static_cast<Index>(A_incr_.size()); }

  const Matrix& A0() const { return A0_; }
  const Matrix& B0() const { return B0_; }
  const std::vector<Matrix>& A_incr() const { return A_incr_; }
  const std::vector<Matrix>& B_incr() const { return B_incr_; }

 private:
  Matrix A0_;
  std::vector<Matrix> A_incr_;
  Matrix B0_;
  std::vector<Matrix> B_incr_;
};

struct SystemMatrices {
  Matrix A;
  Matrix B;
};

SystemMatrices eval_system(const AffineParametrization& par, const Vector& theta);

/// x+ = delta(x,u) + D(x,u) * theta, both linear in (x,u).
struct RegressionTerms {
  Vector delta;  // A0 x + B0 u
  Matrix D;      // column i: A_incr[i] x + B_incr[i] u
};

RegressionTerms regression_terms(const AffineParametrization& par, const Vector& x,
                                 const Vector& u);

/// View of a parametrization in regression form. Holds a reference; the
/// parametrization must outlive it.
class RegressionForm {
 public:
  explicit RegressionForm(const AffineParametrization& par) : par_(&par) {}

  RegressionTerms terms(const Vector& x, const Vector& u) const {
    return regression_terms(*par_, x, u);
  }
  const AffineParametrization& parametrization() const { return *par_; }

 private:
  const AffineParametrization* par_;
};

/// Axis-aligned box of admissible parameters. Projection is clipping.
class ParamBox {
 public:
  ParamBox() = default;
  ParamBox(Vector lower, Vector upper);

  Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector project(const Vector& theta) const;
  bool contains(const Vector& theta, double tol = 0.0) const;
  /// Euclidean length of the main diagonal.
  double diameter() const;

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace aclqr

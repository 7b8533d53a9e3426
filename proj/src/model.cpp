#include "aclqr/model.hpp"

#include <algorithm>
#include <string>

#include "aclqr/error.hpp"

namespace aclqr {

AffineParametrization::AffineParametrization(Matrix A0, std::vector<Matrix> A_incr,
                                             Matrix B0, std::vector<Matrix> B_incr)
    : A0_(std::move(A0)),
      A_incr_(std::move(A_incr)),
      B0_(std::move(B0)),
      B_incr_(std::move(B_incr)) {
  const Index n = A0_.rows();
  require(n >= 1 && A0_.cols() == n, "parametrization: A0 must be square and nonempty");
  require(B0_.rows() == n && B0_.cols() >= 1, "parametrization: B0 must be n x m, m >= 1");
  require(A_incr_.size() == B_incr_.size(),
          "parametrization: A_incr and B_incr must have the same length p");
  require(!A_incr_.empty(), "parametrization: at least one parameter is required");
  require(all_finite(A0_) && all_finite(B0_), "parametrization: non-finite base matrix");
  for (std::size_t i = 0; i < A_incr_.size(); ++i) {
    const std::string idx = std::to_string(i);
    require(A_incr_[i].rows() == n && A_incr_[i].cols() == n,
            "parametrization: A_incr[" + idx + "] must be n x n");
    require(B_incr_[i].rows() == n && B_incr_[i].cols() == B0_.cols(),
            "parametrization: B_incr[" + idx + "] must be n x m");
    require(all_finite(A_incr_[i]) && all_finite(B_incr_[i]),
            "parametrization: non-finite increment " + idx);
  }
}

SystemMatrices eval_system(const AffineParametrization& par, const Vector& theta) {
  require(theta.size() == par.p(), "eval_system: theta has wrong dimension");
  require(theta.allFinite(), "eval_system: theta must be finite");
  SystemMatrices sys{par.A0(), par.B0()};
  for (Index i = 0; i < par.p(); ++i) {
    sys.A += theta(i) * par.A_incr()[i];
    sys.B += theta(i) * par.B_incr()[i];
  }
  return sys;
}

RegressionTerms regression_terms(const AffineParametrization& par, const Vector& x,
                                 const Vector& u) {
  require(x.size() == par.n(), "regression_terms: x has wrong dimension");
  require(u.size() == par.m(), "regression_terms: u has wrong dimension");
  RegressionTerms t;
  t.delta = par.A0() * x + par.B0() * u;
  t.D.resize(par.n(), par.p());
  for (Index i = 0; i < par.p(); ++i) {
    t.D.col(i) = par.A_incr()[i] * x + par.B_incr()[i] * u;
  }
  return t;
}

ParamBox::ParamBox(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  require(lower_.size() == upper_.size() && lower_.size() >= 1,
          "param box: bounds must have equal, positive length");
  require(lower_.allFinite() && upper_.allFinite(), "param box: bounds must be finite");
  require((lower_.array() <= upper_.array()).all(), "param box: lower must be <= upper");
}

Vector ParamBox::project(const Vector& theta) const {
  require(theta.size() == dim(), "project: theta has wrong dimension");
  Vector out(dim());
  for (Index i = 0; i < dim(); ++i) out(i) = std::clamp(theta(i), lower_(i), upper_(i));
  return out;
}

bool ParamBox::contains(const Vector& theta, double tol) const {
  if (theta.size() != dim()) return false;
  return ((theta.array() >= lower_.array() - tol) && (theta.array() <= upper_.array() + tol))
      .all();
}

double ParamBox::diameter() const { return (upper_ - lower_).norm(); }

}  // namespace aclqr

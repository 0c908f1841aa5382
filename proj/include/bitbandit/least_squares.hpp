#pragma once

#include <cstdint>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "bitbandit/common.hpp"

namespace bitbandit {

// xᵀ M x for small dense M, without temporaries.
template <typename Scalar, typename MatT, typename VecT>
Scalar quad_form(const MatT& M, const VecT& x) {
  Scalar s = 0;
  const Eigen::Index n = x.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    Scalar row = 0;
    for (Eigen::Index i = 0; i < n; ++i) row += M(i, j) * x[i];
    s += row * x[j];
  }
  return s;
}

// Regularized Gram matrix V = λI + Σ a aᵀ with its inverse kept current by
// Sherman–Morrison; the inverse is refactorized from V every
// kRefreshInterval updates to bound drift.
template <typename Scalar>
class GramState {
 public:
  static constexpr std::int64_t kRefreshInterval = 1000;

  GramState(Eigen::Index d, Scalar lambda)
      : lambda_(lambda),
        V_(Matrix<Scalar>::Identity(d, d) * lambda),
        V_inv_(Matrix<Scalar>::Identity(d, d) / lambda),
        work_(d) {
    if (d < 1) throw InvalidArgument("GramState: d must be >= 1");
    if (!(lambda > 0)) throw InvalidArgument("GramState: lambda must be positive");
  }

  Eigen::Index dim() const { return V_.rows(); }
  Scalar lambda() const { return lambda_; }
  std::int64_t updates() const { return updates_; }
  const Matrix<Scalar>& V() const { return V_; }
  const Matrix<Scalar>& V_inv() const { return V_inv_; }

  template <typename VecT>
  void update(const VecT& a) {
    V_.noalias() += a * a.transpose();
    ++updates_;
    if (updates_ % kRefreshInterval == 0) {
      refresh();
      return;
    }
    work_.noalias() = V_inv_ * a;
    const Scalar denom = Scalar(1) + a.dot(work_);
    V_inv_.noalias() -= (work_ / denom) * work_.transpose();
  }

  void refresh() {
    Eigen::LDLT<Matrix<Scalar>> ldlt(V_);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw InternalError("Gram matrix lost positive definiteness");
    }
    V_inv_ = ldlt.solve(Matrix<Scalar>::Identity(V_.rows(), V_.cols()));
    V_inv_ = (V_inv_ + V_inv_.transpose()) / Scalar(2);
  }

  Scalar lambda_min() const {
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(V_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
  }

 private:
  Scalar lambda_;
  Matrix<Scalar> V_;
  Matrix<Scalar> V_inv_;
  Vector<Scalar> work_;
  std::int64_t updates_ = 0;
};

// Ridge least-squares state: V = λI + Σ a aᵀ, b = Σ a y, θ̂ = V⁻¹ b.
template <typename Scalar>
class LsState {
 public:
  LsState(Eigen::Index d, Scalar lambda)
      : gram_(d, lambda), b_(Vector<Scalar>::Zero(d)), theta_(Vector<Scalar>::Zero(d)) {}

  Eigen::Index dim() const { return gram_.dim(); }
  Scalar lambda() const { return gram_.lambda(); }
  const GramState<Scalar>& gram() const { return gram_; }
  const Matrix<Scalar>& V() const { return gram_.V(); }
  const Vector<Scalar>& b() const { return b_; }
  const Vector<Scalar>& theta_hat() const { return theta_; }

  template <typename VecT>
  void update(const VecT& a, Scalar y) {
    gram_.update(a);
    b_.noalias() += a * y;
    theta_.noalias() = gram_.V_inv() * b_;
  }

 private:
  GramState<Scalar> gram_;
  Vector<Scalar> b_;
  Vector<Scalar> theta_;
};

template <typename Scalar, typename VecT>
LsState<Scalar> ls_update(LsState<Scalar> s, const VecT& a, Scalar y) {
  s.update(a, y);
  return s;
}

// Batch reference: solve (λI + XᵀX) θ = Xᵀy from scratch. Rows of X are actions.
template <typename Scalar>
Vector<Scalar> ridge_solve(const Matrix<Scalar>& X, const Vector<Scalar>& y, Scalar lambda) {
  Matrix<Scalar> V = X.transpose() * X;
  V.diagonal().array() += lambda;
  return V.ldlt().solve(X.transpose() * y);
}

}  // namespace bitbandit

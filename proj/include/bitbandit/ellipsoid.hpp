#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "bitbandit/common.hpp"
#include "bitbandit/env.hpp"
#include "bitbandit/least_squares.hpp"

namespace bitbandit {

// {θ : ‖θ − center‖_shape ≤ radius}. The inverse shape is carried along
// because every optimistic index needs ‖a‖_{shape⁻¹}.
template <typename Scalar>
struct ConfidenceEllipsoid {
  Vector<Scalar> center;
  Matrix<Scalar> shape;
  Matrix<Scalar> shape_inv;
  Scalar radius = 0;

  bool contains(const Vector<Scalar>& theta) const {
    Scalar s = 0;
    const Eigen::Index n = theta.size();
    for (Eigen::Index j = 0; j < n; ++j) {
      Scalar row = 0;
      for (Eigen::Index i = 0; i < n; ++i) row += shape(i, j) * (theta[i] - center[i]);
      s += row * (theta[j] - center[j]);
    }
    return s <= radius * radius;
  }
};

// max over the ellipsoid of ⟨θ, a⟩, attained in closed form:
// ⟨center, a⟩ + radius·‖a‖_{shape⁻¹}.
template <typename Scalar, typename VecT>
Scalar optimistic_value(const ConfidenceEllipsoid<Scalar>& ell, const VecT& a) {
  Scalar lin = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) lin += ell.center[i] * a[i];
  return lin + ell.radius * std::sqrt(quad_form<Scalar>(ell.shape_inv, a));
}

// Optimistic choice over a finite candidate set; ties go to the lowest index.
template <typename Scalar>
Eigen::Index ucb_index(const ConfidenceEllipsoid<Scalar>& ell, const Matrix<Scalar>& candidates) {
  if (candidates.cols() == 0) throw InvalidArgument("ucb_action: empty action set");
  Eigen::Index best = 0;
  Scalar best_score = -std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index k = 0; k < candidates.cols(); ++k) {
    const Scalar s = optimistic_value(ell, candidates.col(k));
    if (s > best_score) {
      best_score = s;
      best = k;
    }
  }
  return best;
}

template <typename Scalar>
std::pair<Eigen::Index, Vector<Scalar>> ucb_action(const ConfidenceEllipsoid<Scalar>& ell,
                                                    const Matrix<Scalar>& candidates) {
  const Eigen::Index k = ucb_index(ell, candidates);
  return {k, candidates.col(k)};
}

inline std::pair<Eigen::Index, VectorXd> ucb_action(const ConfidenceEllipsoid<double>& ell,
                                                    const ActionSet& A) {
  return ucb_action(ell, A.candidates());
}

}  // namespace bitbandit

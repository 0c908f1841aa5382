#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Cholesky>

#include "bitbandit/common.hpp"
#include "bitbandit/ellipsoid.hpp"
#include "bitbandit/least_squares.hpp"
#include "bitbandit/link.hpp"
#include "bitbandit/linucb.hpp"

namespace bitbandit {

// Agent-side GLM state: the full history (the estimator equation has no
// finite sufficient statistic), Σ y a, the Gram matrix, and the last root.
template <typename Scalar>
class GlmAgentState {
 public:
  GlmAgentState(Eigen::Index d, Scalar lambda)
      : gram_(d, lambda), sum_ya_(Vector<Scalar>::Zero(d)), theta_(Vector<Scalar>::Zero(d)) {}

  Eigen::Index dim() const { return gram_.dim(); }
  Scalar lambda() const { return gram_.lambda(); }
  std::int64_t samples() const { return static_cast<std::int64_t>(ys_.size()); }
  const GramState<Scalar>& gram() const { return gram_; }
  const Vector<Scalar>& sum_ya() const { return sum_ya_; }
  const Vector<Scalar>& theta_hat() const { return theta_; }
  void set_theta_hat(const Vector<Scalar>& th) { theta_ = th; }

  Eigen::Map<const Vector<Scalar>> action(std::int64_t s) const {
    return {actions_.data() + s * dim(), dim()};
  }
  Scalar reward(std::int64_t s) const { return ys_[s]; }

  template <typename VecT>
  void observe(const VecT& a, Scalar y) {
    actions_.insert(actions_.end(), a.data(), a.data() + a.size());
    ys_.push_back(y);
    sum_ya_.noalias() += a * y;
    gram_.update(a);
  }

 private:
  GramState<Scalar> gram_;
  std::vector<Scalar> actions_;
  std::vector<Scalar> ys_;
  Vector<Scalar> sum_ya_;
  Vector<Scalar> theta_;
};

// g(θ) = λθ + Σ μ(⟨θ, a_s⟩) a_s.
template <typename Scalar>
Vector<Scalar> g_eval(const Vector<Scalar>& theta, const GlmAgentState<Scalar>& st,
                      const LinkFunction& link) {
  Vector<Scalar> g = st.lambda() * theta;
  for (std::int64_t s = 0; s < st.samples(); ++s) {
    const auto a = st.action(s);
    g.noalias() += static_cast<Scalar>(link.mu(static_cast<double>(a.dot(theta)))) * a;
  }
  return g;
}

// Φ(θ) = (λ/2)‖θ‖² + Σ m(⟨θ, a_s⟩) − ⟨θ, Σ y a⟩, with m' = μ. ∇Φ = g(θ) − Σ y a.
template <typename Scalar>
Scalar glm_potential(const Vector<Scalar>& theta, const GlmAgentState<Scalar>& st,
                     const LinkFunction& link) {
  Scalar phi = Scalar(0.5) * st.lambda() * theta.squaredNorm() - theta.dot(st.sum_ya());
  for (std::int64_t s = 0; s < st.samples(); ++s) {
    phi += static_cast<Scalar>(link.potential(static_cast<double>(st.action(s).dot(theta))));
  }
  return phi;
}

struct GlmFitResult {
  int iterations = 0;
  double residual = 0;
};

// Root of g(θ) = Σ y a by damped Newton on the strictly convex Φ, warm-started
// from the state's previous root. Backtracking by halving until Armijo
// (c = 1e-4) or a residual drop of t/2 holds.
// tol ≤ 0 selects 1e-9·(1 + ‖Σ y a‖).
template <typename Scalar>
GlmFitResult glm_fit(GlmAgentState<Scalar>& st, const LinkFunction& link, double tol = 0.0,
                     int max_iter = 100) {
  const Eigen::Index d = st.dim();
  if (tol <= 0) tol = 1e-9 * (1.0 + static_cast<double>(st.sum_ya().norm()));
  Vector<Scalar> theta = st.theta_hat();
  Vector<Scalar> grad(d), step(d), cand(d);
  Matrix<Scalar> H(d, d);

  auto gradient = [&](const Vector<Scalar>& th, Vector<Scalar>& out) {
    out = st.lambda() * th - st.sum_ya();
    for (std::int64_t s = 0; s < st.samples(); ++s) {
      const auto a = st.action(s);
      out.noalias() += static_cast<Scalar>(link.mu(static_cast<double>(a.dot(th)))) * a;
    }
    return static_cast<double>(out.norm());
  };

  double residual = gradient(theta, grad);
  for (int it = 0; it < max_iter; ++it) {
    if (residual <= tol) {
      st.set_theta_hat(theta);
      return {it, residual};
    }
    H.setIdentity();
    H *= st.lambda();
    for (std::int64_t s = 0; s < st.samples(); ++s) {
      const auto a = st.action(s);
      H.noalias() += static_cast<Scalar>(link.mu_dot(static_cast<double>(a.dot(theta)))) *
                     (a * a.transpose());
    }
    step = H.ldlt().solve(grad);
    const Scalar slope = grad.dot(step);
    const Scalar phi0 = glm_potential(theta, st, link);
    Vector<Scalar> g2(d);
    double cand_residual = 0;
    Scalar t = 1;
    bool accepted = false;
    while (t > Scalar(1e-12)) {
      cand = theta - t * step;
      cand_residual = gradient(cand, g2);
      // Near the root the decrease in Φ drops below its rounding noise, so a
      // sufficient drop in ‖∇Φ‖ also counts.
      if (glm_potential(cand, st, link) <= phi0 - Scalar(1e-4) * t * slope ||
          cand_residual <= (1.0 - 0.5 * static_cast<double>(t)) * residual) {
        accepted = true;
        break;
      }
      t /= 2;
    }
    if (!accepted) throw ConvergenceError("glm_fit: line search failed", residual);
    theta = cand;
    grad = g2;
    residual = cand_residual;
  }
  if (residual <= tol) {
    st.set_theta_hat(theta);
    return {max_iter, residual};
  }
  throw ConvergenceError("glm_fit: exceeded " + std::to_string(max_iter) +
                             " iterations, residual " + std::to_string(residual),
                         residual);
}

// H(θ) = ‖g(θ) − g(θ_s)‖_{V⁻¹}.
template <typename Scalar>
Scalar h_metric(const Vector<Scalar>& theta, const GlmAgentState<Scalar>& st,
                const Vector<Scalar>& theta_s, const LinkFunction& link) {
  Vector<Scalar> w = st.lambda() * (theta - theta_s);
  for (std::int64_t s = 0; s < st.samples(); ++s) {
    const auto a = st.action(s);
    const double diff = link.mu(static_cast<double>(a.dot(theta))) -
                        link.mu(static_cast<double>(a.dot(theta_s)));
    w.noalias() += static_cast<Scalar>(diff) * a;
  }
  return std::sqrt(quad_form<Scalar>(st.gram().V_inv(), w));
}

// √β_T + k2·sqrt(λ + (t-1)L²)·q_t.
double glm_conf_radius(double beta_sqrt, double k2, double lambda, double t, double L, double q_t);

// Optimism over the ellipsoid {θ : ‖θ − θ_s‖_V ≤ radius/k1}, which contains
// the H-ball of the given radius since H(θ) ≥ k1‖θ − θ_s‖_V.
template <typename Scalar>
Eigen::Index glm_ucb_index(const Vector<Scalar>& theta_s, const GramState<Scalar>& gram,
                           Scalar radius, Scalar k1, const Matrix<Scalar>& candidates) {
  ConfidenceEllipsoid<Scalar> ell{theta_s, gram.V(), gram.V_inv(), radius / k1};
  return ucb_index(ell, candidates);
}

std::int64_t glm_exploration_length(int d, std::int64_t T, double L, double k1, double k2,
                                    double c_explore = 10.0);

// Information-constrained GLM-UCB with the link named in cfg.link.
LinearRun run_ic_glmucb(const LinearConfig& cfg, const TraceSink& sink = {});

}  // namespace bitbandit

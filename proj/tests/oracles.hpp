#pragma once

// Independent reference computations. Written from the defining formulas
// with long double and direct (non-incremental) evaluation, sharing no code
// with the library.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using LD = long double;

inline LD beta_sqrt(LD lambda, LD M, LD delta, LD d, LD T, LD L) {
  return std::sqrt(lambda) * M +
         std::sqrt(2 * std::log(1 / delta) + d * std::log(1 + T * L * L / (d * lambda)));
}

inline LD f_of_T(LD L, LD T, LD d, LD beta, LD k1k2 = 1) {
  return LD(0.6) / L * std::sqrt(beta / (k1k2 * T * std::log(d * L * T)));
}

// q after τ steps of q ← ε(q + f), as the explicit geometric sum.
inline LD quant_q(LD q0, LD f, LD eps, std::int64_t tau) {
  LD s = std::pow(eps, static_cast<LD>(tau)) * q0;
  for (std::int64_t k = 1; k <= tau; ++k) s += f * std::pow(eps, static_cast<LD>(k));
  return s;
}

// p_k of the scalar recursion, unrolled:
// p_k = γ^{k-1} p_1 + 2 Σ_{j=1}^{k-1} γ^{k-1-j} f_j.
struct ScalarUnrolled {
  std::vector<LD> p, q, f;  // index k (1-based; slot 0 unused)
};

inline ScalarUnrolled scalar_unrolled(LD gamma, LD m, LD T, std::int64_t kmax) {
  ScalarUnrolled u;
  u.p.assign(kmax + 1, 0);
  u.q.assign(kmax + 1, 0);
  u.f.assign(kmax + 1, 0);
  const LD logT = std::log(T);
  for (std::int64_t k = 1; k <= kmax; ++k) u.f[k] = 2 * std::sqrt(logT / k);
  // Running geometric sum S_k = Σ_{j<k} γ^{k-1-j} f_j, accumulated from the
  // tail so each term is formed explicitly.
  for (std::int64_t k = 1; k <= kmax; ++k) {
    LD s = 0, g = 1;
    for (std::int64_t j = k - 1; j >= 1; --j) {
      s += g * u.f[j];
      g *= gamma;
      if (g < 1e-30L) break;  // remaining terms are far below double precision
    }
    u.p[k] = std::pow(gamma, static_cast<LD>(k - 1)) * (m + u.f[1]) + 2 * s;
    u.q[k] = gamma * u.p[k];
  }
  return u;
}

// Ridge solution by an explicit normal-equation solve.
inline Eigen::VectorXd ridge(const std::vector<Eigen::VectorXd>& A, const std::vector<double>& y,
                             double lambda) {
  const auto d = A.front().size();
  Eigen::MatrixXd V = lambda * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  for (std::size_t s = 0; s < A.size(); ++s) {
    V += A[s] * A[s].transpose();
    b += A[s] * y[s];
  }
  return V.colPivHouseholderQr().solve(b);
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Logistic GLM root by Picard iteration θ ← θ − η ∇Φ(θ) with
// η = 1/(λ + k2·λ_max(Σ a aᵀ)), run until the iterate stops moving.
inline Eigen::VectorXd picard_logistic(const std::vector<Eigen::VectorXd>& A,
                                       const std::vector<double>& y, double lambda,
                                       double k2 = 0.25) {
  const auto d = A.front().size();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd sya = Eigen::VectorXd::Zero(d);
  for (std::size_t s = 0; s < A.size(); ++s) {
    S += A[s] * A[s].transpose();
    sya += A[s] * y[s];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const double eta = 1.0 / (lambda + k2 * es.eigenvalues().maxCoeff());
  Eigen::VectorXd th = Eigen::VectorXd::Zero(d);
  for (int it = 0; it < 2000000; ++it) {
    Eigen::VectorXd g = lambda * th - sya;
    for (std::size_t s = 0; s < A.size(); ++s) g += sigmoid(A[s].dot(th)) * A[s];
    const Eigen::VectorXd next = th - eta * g;
    if ((next - th).norm() <= 1e-13 * (1 + th.norm())) return next;
    th = next;
  }
  return th;
}

}  // namespace oracle

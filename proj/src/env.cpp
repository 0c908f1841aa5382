#include "bitbandit/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace bitbandit {
namespace {

// Tolerance on ‖a‖ ≤ L for vectors that were normalized in floating point.
constexpr double kNormSlack = 1e-12;

void check_action_norm(const VectorXd& a, double L) {
  if (a.norm() > L * (1.0 + kNormSlack)) {
    throw InvalidArgument("action norm " + std::to_string(a.norm()) + " exceeds L = " +
                          std::to_string(L));
  }
}

void check_model(const VectorXd& theta_star, double M, double L) {
  if (theta_star.size() == 0) throw InvalidArgument("model dimension must be positive");
  if (!(M > 0) || !(L > 0)) throw InvalidArgument("M and L must be positive");
  if (theta_star.norm() > M * (1.0 + kNormSlack)) {
    throw InvalidArgument("||theta_star|| exceeds M");
  }
}

}  // namespace

ActionSet::ActionSet(MatrixXd candidates, double L) : candidates_(std::move(candidates)), L_(L) {
  if (candidates_.cols() < 2) throw InvalidArgument("action set needs K >= 2 candidates");
  for (Eigen::Index k = 0; k < candidates_.cols(); ++k) {
    if (candidates_.col(k).norm() > L_ * (1.0 + kNormSlack)) {
      throw InvalidArgument("candidate " + std::to_string(k) + " exceeds the norm bound L");
    }
  }
}

VectorXd sample_sphere(Eigen::Index d, Rng& rng) {
  if (d < 1) throw InvalidArgument("sample_sphere: dimension must be >= 1");
  VectorXd v(d);
  double n2 = 0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.normal();
    n2 = v.squaredNorm();
  } while (n2 == 0.0);
  return v / std::sqrt(n2);
}

ActionSet make_action_set(Eigen::Index d, Eigen::Index K, double L, Rng& rng, double norm) {
  if (K < 2) throw InvalidArgument("make_action_set: K must be >= 2");
  if (!(norm > 0) || norm > L) throw InvalidArgument("make_action_set: need 0 < norm <= L");
  MatrixXd cands(d, K);
  for (Eigen::Index k = 0; k < K; ++k) cands.col(k) = norm * sample_sphere(d, rng);
  return ActionSet(std::move(cands), L);
}

LinearEnv::LinearEnv(VectorXd theta_star, double M, double L, Rng noise_rng, double noise_sd)
    : theta_star_(std::move(theta_star)), M_(M), L_(L), rng_(noise_rng), noise_sd_(noise_sd) {
  check_model(theta_star_, M_, L_);
}

double LinearEnv::observe(const VectorXd& a) {
  check_action_norm(a, L_);
  return mean_reward(a) + noise_sd_ * rng_.normal();
}

GlmEnv::GlmEnv(VectorXd theta_star, LinkFunction link, double M, double L, Rng noise_rng,
               double noise_sd)
    : theta_star_(std::move(theta_star)),
      link_(std::move(link)),
      M_(M),
      L_(L),
      rng_(noise_rng),
      noise_sd_(noise_sd) {
  check_model(theta_star_, M_, L_);
}

double GlmEnv::observe(const VectorXd& a) {
  check_action_norm(a, L_);
  return mean_reward(a) + noise_sd_ * rng_.normal();
}

MabEnv::MabEnv(std::vector<double> means, Rng noise_rng, double m, double noise_sd)
    : rng_(noise_rng), noise_sd_(noise_sd) {
  if (means.size() < 2) throw InvalidArgument("MAB needs at least 2 arms");
  const auto best = static_cast<std::size_t>(
      std::max_element(means.begin(), means.end()) - means.begin());
  original_.resize(means.size());
  std::iota(original_.begin(), original_.end(), std::size_t{0});
  std::swap(original_[0], original_[best]);
  means_.reserve(means.size());
  for (auto idx : original_) means_.push_back(means[idx]);
  gaps_.reserve(means_.size());
  for (double v : means_) gaps_.push_back(means_[0] - v);

  double max_abs = 0;
  for (double v : means_) max_abs = std::max(max_abs, std::abs(v));
  if (m <= 0) {
    m_ = std::max(1.0, max_abs);
  } else {
    if (m < 1.0 || max_abs > m) throw InvalidArgument("MAB needs m >= 1 and max |theta_i| <= m");
    m_ = m;
  }
}

double MabEnv::observe(std::size_t arm) {
  if (arm >= means_.size()) throw InvalidArgument("arm index out of range");
  return means_[arm] + noise_sd_ * rng_.normal();
}

double best_mean(const LinearEnv& env, const ActionSet& A) {
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < A.size(); ++k) best = std::max(best, env.theta_star().dot(A[k]));
  return best;
}

double best_mean(const GlmEnv& env, const ActionSet& A) {
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < A.size(); ++k) {
    best = std::max(best, env.link().mu(env.theta_star().dot(A[k])));
  }
  return best;
}

// The played action is feasible by definition, so the comparator is the max
// over the candidates together with `a`; regret is never negative.
double instant_regret(const LinearEnv& env, const ActionSet& A, const VectorXd& a) {
  return std::max(0.0, best_mean(env, A) - env.mean_reward(a));
}

double instant_regret(const GlmEnv& env, const ActionSet& A, const VectorXd& a) {
  return std::max(0.0, best_mean(env, A) - env.mean_reward(a));
}

double instant_regret(const MabEnv& env, std::size_t arm) {
  if (arm >= env.arms()) throw InvalidArgument("arm index out of range");
  return env.gaps()[arm];
}

}  // namespace bitbandit

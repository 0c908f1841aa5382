#pragma once

#include <cstddef>
#include <vector>

#include "bitbandit/common.hpp"
#include "bitbandit/link.hpp"
#include "bitbandit/rng.hpp"

namespace bitbandit {

// Finite candidate set, one action per column.
class ActionSet {
 public:
  ActionSet(MatrixXd candidates, double L);

  Eigen::Index dim() const { return candidates_.rows(); }
  Eigen::Index size() const { return candidates_.cols(); }
  double norm_bound() const { return L_; }
  const MatrixXd& candidates() const { return candidates_; }
  auto operator[](Eigen::Index k) const { return candidates_.col(k); }

 private:
  MatrixXd candidates_;
  double L_;
};

// Uniform draw on the unit sphere S^{d-1}: a normalized vector of i.i.d.
// standard normals.
VectorXd sample_sphere(Eigen::Index d, Rng& rng);

// K sphere samples scaled to `norm` (≤ L). Deterministic in the stream state.
ActionSet make_action_set(Eigen::Index d, Eigen::Index K, double L, Rng& rng, double norm = 1.0);

// y = ⟨θ*, a⟩ + η with η ~ N(0, noise_sd²). noise_sd = 0 stubs the noise
// while still advancing the stream one draw per observation.
class LinearEnv {
 public:
  LinearEnv(VectorXd theta_star, double M, double L, Rng noise_rng, double noise_sd = 1.0);

  Eigen::Index dim() const { return theta_star_.size(); }
  const VectorXd& theta_star() const { return theta_star_; }
  double M() const { return M_; }
  double L() const { return L_; }

  double mean_reward(const VectorXd& a) const { return theta_star_.dot(a); }
  double observe(const VectorXd& a);

 private:
  VectorXd theta_star_;
  double M_, L_;
  Rng rng_;
  double noise_sd_;
};

// y = μ(⟨θ*, a⟩) + η.
class GlmEnv {
 public:
  GlmEnv(VectorXd theta_star, LinkFunction link, double M, double L, Rng noise_rng,
         double noise_sd = 1.0);

  Eigen::Index dim() const { return theta_star_.size(); }
  const VectorXd& theta_star() const { return theta_star_; }
  const LinkFunction& link() const { return link_; }
  double M() const { return M_; }
  double L() const { return L_; }

  double mean_reward(const VectorXd& a) const { return link_.mu(theta_star_.dot(a)); }
  double observe(const VectorXd& a);

 private:
  VectorXd theta_star_;
  LinkFunction link_;
  double M_, L_;
  Rng rng_;
  double noise_sd_;
};

// Unstructured K-armed bandit. Arms are relabeled at construction so that
// index 0 is an optimal arm; `original_index` maps back.
class MabEnv {
 public:
  // m ≤ 0 means "use max(1, max |θ_i|)".
  MabEnv(std::vector<double> means, Rng noise_rng, double m = 0.0, double noise_sd = 1.0);

  std::size_t arms() const { return means_.size(); }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& gaps() const { return gaps_; }
  std::size_t original_index(std::size_t arm) const { return original_[arm]; }
  double m() const { return m_; }

  double observe(std::size_t arm);

 private:
  std::vector<double> means_;
  std::vector<double> gaps_;
  std::vector<std::size_t> original_;
  double m_;
  Rng rng_;
  double noise_sd_;
};

// Best candidate mean minus the mean of `a`; `a` need not be a candidate.
double instant_regret(const LinearEnv& env, const ActionSet& A, const VectorXd& a);
double instant_regret(const GlmEnv& env, const ActionSet& A, const VectorXd& a);
double instant_regret(const MabEnv& env, std::size_t arm);

double best_mean(const LinearEnv& env, const ActionSet& A);
double best_mean(const GlmEnv& env, const ActionSet& A);

}  // namespace bitbandit

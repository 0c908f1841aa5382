#include <gtest/gtest.h>

#include <cmath>

#include "bitbandit/env.hpp"
#include "bitbandit/rng.hpp"

using namespace bitbandit;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

MatrixXd basis2() { return MatrixXd::Identity(2, 2); }

}  // namespace

TEST(Env, ZeroNoiseLinearObserve) {
  LinearEnv env(vec2(1, 0), 1.0, 1.0, Rng(1), 0.0);
  EXPECT_EQ(env.observe(vec2(1, 0)), 1.0);
  EXPECT_EQ(env.observe(vec2(0, 1)), 0.0);
}

TEST(Env, ZeroNoiseLogisticObserve) {
  GlmEnv env(vec2(1, 0), LinkFunction::logistic(), 1.0, 1.0, Rng(1), 0.0);
  EXPECT_NEAR(env.observe(vec2(1, 0)), 0.7310585786300049, 1e-15);
}

TEST(Env, ObserveAdvancesOneDraw) {
  LinearEnv env(vec2(0, 0), 1.0, 1.0, Rng(7), 1.0);
  Rng ref(7);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(env.observe(vec2(1, 0)), ref.normal());
}

TEST(Env, RejectsLongAction) {
  LinearEnv env(vec2(1, 0), 1.0, 1.0, Rng(1));
  EXPECT_THROW(env.observe(vec2(1, 1)), InvalidArgument);
}

TEST(Env, RejectsThetaOutsideBall) {
  EXPECT_THROW(LinearEnv(vec2(2, 0), 1.0, 1.0, Rng(1)), InvalidArgument);
}

TEST(Env, SameSeedSameRewards) {
  LinearEnv a(vec2(0.3, 0.4), 1.0, 1.0, derive_stream(5, Stream::kNoise));
  LinearEnv b(vec2(0.3, 0.4), 1.0, 1.0, derive_stream(5, Stream::kNoise));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.observe(vec2(0.6, 0.8)), b.observe(vec2(0.6, 0.8)));
}

TEST(Env, InstantRegretExamples) {
  LinearEnv env(vec2(1, 0), 1.0, 1.0, Rng(1), 0.0);
  ActionSet A(basis2(), 1.0);
  EXPECT_EQ(instant_regret(env, A, vec2(1, 0)), 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(instant_regret(env, A, vec2(r, r)), 1.0 - r, 1e-15);
  EXPECT_NEAR(instant_regret(env, A, vec2(r, r)), 0.2928932188134524, 1e-15);
}

TEST(Env, InstantRegretNeverNegative) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const VectorXd th = sample_sphere(3, rng);
    LinearEnv env(th, 1.0, 1.0, Rng(1), 0.0);
    ActionSet A = make_action_set(3, 4, 1.0, rng);
    const VectorXd a = sample_sphere(3, rng);
    EXPECT_GE(instant_regret(env, A, a), 0.0);
    for (Eigen::Index k = 0; k < A.size(); ++k) {
      const double reg = instant_regret(env, A, A.candidates().col(k));
      EXPECT_GE(reg, 0.0);
      EXPECT_EQ(reg == 0.0, th.dot(A.candidates().col(k)) == best_mean(env, A));
    }
  }
}

TEST(Env, MabGapsAndRelabel) {
  MabEnv env({0.2, 0.5}, Rng(1), 0.0, 0.0);
  EXPECT_EQ(env.original_index(0), 1u);
  EXPECT_EQ(env.gaps()[0], 0.0);
  EXPECT_NEAR(instant_regret(env, 1), 0.3, 1e-15);
  EXPECT_EQ(env.m(), 1.0);
  EXPECT_EQ(env.observe(0), 0.5);
}

TEST(Env, MabValidatesBound) {
  EXPECT_THROW(MabEnv({0.2, 3.0}, Rng(1), 2.0), InvalidArgument);
  MabEnv env({-4.0, 2.0}, Rng(1));
  EXPECT_EQ(env.m(), 4.0);
  for (double g : env.gaps()) EXPECT_GE(g, 0.0);
}

TEST(Env, SphereD1) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const VectorXd v = sample_sphere(1, rng);
    EXPECT_TRUE(v[0] == 1.0 || v[0] == -1.0);
  }
  EXPECT_THROW(sample_sphere(0, rng), InvalidArgument);
}

TEST(Env, SphereUnitNormAndCentered) {
  Rng rng(12);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const VectorXd v = sample_sphere(3, rng);
    ASSERT_NEAR(v.norm(), 1.0, 1e-12);
    mean += v;
  }
  mean /= n;
  for (int i = 0; i < 3; ++i) EXPECT_LT(std::abs(mean[i]), 0.02);
}

TEST(Env, ActionSetDeterministicAndBounded) {
  Rng r1(4), r2(4);
  const ActionSet a = make_action_set(2, 2, 1.0, r1);
  const ActionSet b = make_action_set(2, 2, 1.0, r2);
  EXPECT_EQ(a.candidates(), b.candidates());
  for (Eigen::Index k = 0; k < a.size(); ++k) EXPECT_LE(a[k].norm(), 1.0 + 1e-12);
  EXPECT_THROW(make_action_set(2, 1, 1.0, r1), InvalidArgument);
}

TEST(Env, DenseSetHasCloseNeighbours) {
  Rng rng(8);
  const ActionSet A = make_action_set(2, 64, 1.0, rng);
  double min_angle = 10;
  for (Eigen::Index i = 0; i < A.size(); ++i) {
    for (Eigen::Index j = i + 1; j < A.size(); ++j) {
      min_angle = std::min(min_angle, std::acos(std::clamp(A[i].dot(A[j]), -1.0, 1.0)));
    }
  }
  EXPECT_LT(min_angle, M_PI / 6);
}

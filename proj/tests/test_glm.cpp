#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "bitbandit/glm.hpp"
#include "bitbandit/rng.hpp"
#include "oracles.hpp"

using namespace bitbandit;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

LinearConfig glm_cfg(std::uint64_t seed, const std::string& link) {
  LinearConfig c;
  c.d = 2;
  c.T = 4000;
  c.B = 12;
  c.c_explore = 0.5;
  c.seed = seed;
  c.link = link;
  return c;
}

}  // namespace

TEST(LinkConstants, Logistic) {
  const auto kc = link_constants(LinkFunction::logistic(), 1.0, 1.0);
  EXPECT_NEAR(kc.k1, 0.19661193324148185, 1e-15);
  EXPECT_EQ(kc.k2, 1.0);
}

TEST(LinkConstants, IdentityIsUnit) {
  const auto kc = link_constants(LinkFunction::identity(), 3.0, 2.0);
  EXPECT_EQ(kc.k1, 1.0);
  EXPECT_EQ(kc.k2, 1.0);
}

TEST(LinkConstants, ConstantDerivativeCustomLink) {
  const auto link = LinkFunction::custom(
      "twice", [](double z) { return 2 * z; }, [](double) { return 2.0; },
      [](double z) { return z * z; });
  const auto kc = link_constants(link, 1.0, 1.0);
  EXPECT_EQ(kc.k1, 1.0);
  EXPECT_EQ(kc.k2, 2.0);
}

TEST(LinkConstants, GridAgreesWithClosedForm) {
  for (double c : {0.5, 1.0, 3.0}) {
    const auto link = LinkFunction::scaled_logistic(c);
    const auto a = link_constants(link, 1.0, 1.0);
    const auto b = link_constants_grid(link, 1.0, 1.0);
    EXPECT_NEAR(a.k1, b.k1, 1e-9) << c;
    EXPECT_NEAR(a.k2, b.k2, 1e-9) << c;
  }
}

TEST(LinkConstants, FlatLinkRejected) {
  const auto flat = LinkFunction::custom(
      "flat", [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; });
  EXPECT_THROW(link_constants(flat, 1.0, 1.0), ConfigError);
}

TEST(GEval, Examples) {
  GlmAgentState<double> st(1, 1.0);
  EXPECT_EQ(g_eval<double>(vec({0.5}), st, LinkFunction::identity())[0], 0.5);
  st.observe(vec({1.0}), 0.0);
  EXPECT_NEAR(g_eval<double>(vec({1.0}), st, LinkFunction::logistic())[0], 1.7310585786300049,
              1e-15);
}

TEST(GlmFit, EmptyHistoryGivesZero) {
  GlmAgentState<double> st(3, 1.0);
  glm_fit(st, LinkFunction::logistic());
  EXPECT_EQ(st.theta_hat(), VectorXd::Zero(3));
}

TEST(GlmFit, IdentityLinkIsRidge) {
  Rng rng(2);
  GlmAgentState<double> st(3, 1.0);
  std::vector<VectorXd> A;
  std::vector<double> y;
  for (int i = 0; i < 400; ++i) {
    const VectorXd a = sample_sphere(3, rng);
    const double r = 0.3 * a[0] + rng.normal();
    st.observe(a, r);
    A.push_back(a);
    y.push_back(r);
  }
  glm_fit(st, LinkFunction::identity());
  const VectorXd ref = oracle::ridge(A, y, 1.0);
  EXPECT_LE((st.theta_hat() - ref).norm(), 1e-8);
}

TEST(GlmFit, LogisticMatchesPicardIteration) {
  Rng rng(3);
  const VectorXd th = vec({0.6, -0.5});
  GlmAgentState<double> st(2, 1.0);
  std::vector<VectorXd> A;
  std::vector<double> y;
  for (int i = 0; i < 300; ++i) {
    const VectorXd a = sample_sphere(2, rng);
    const double r = oracle::sigmoid(a.dot(th)) + 0.5 * rng.normal();
    st.observe(a, r);
    A.push_back(a);
    y.push_back(r);
  }
  const auto res = glm_fit(st, LinkFunction::logistic());
  EXPECT_LE(res.residual, 1e-9 * (1 + st.sum_ya().norm()));
  const VectorXd ref = oracle::picard_logistic(A, y, 1.0);
  EXPECT_LE((st.theta_hat() - ref).norm(), 1e-8);
}

TEST(HMetric, SandwichAndContainment) {
  Rng rng(4);
  const auto link = LinkFunction::logistic();
  const auto kc = link_constants(link, 1.0, 1.0);
  GlmAgentState<double> st(2, 1.0);
  for (int i = 0; i < 200; ++i) st.observe(sample_sphere(2, rng), 0.0);
  const VectorXd center = 0.5 * sample_sphere(2, rng);
  for (int trial = 0; trial < 1000; ++trial) {
    // Keep both points inside the unit ball where the constants hold.
    const VectorXd th = 0.5 * sample_sphere(2, rng) * rng.uniform();
    const double h = h_metric<double>(th, st, center, link);
    const double vn = std::sqrt((th - center).dot(st.gram().V() * (th - center)));
    ASSERT_GE(h, kc.k1 * vn * (1 - 1e-9));
    ASSERT_LE(h, kc.k2 * vn * (1 + 1e-9));
    // H-ball of radius h is inside the V-ellipsoid of radius h/k1.
    ASSERT_LE(vn, h / kc.k1 * (1 + 1e-9));
  }
}

TEST(GEval, StronglyMonotone) {
  Rng rng(5);
  const auto link = LinkFunction::logistic();
  const double k1 = link_constants(link, 1.0, 1.0).k1;
  GlmAgentState<double> st(3, 1.0);
  for (int i = 0; i < 150; ++i) st.observe(sample_sphere(3, rng), 0.0);
  for (int trial = 0; trial < 500; ++trial) {
    const VectorXd a = sample_sphere(3, rng) * rng.uniform();
    const VectorXd b = sample_sphere(3, rng) * rng.uniform();
    const VectorXd diff = a - b;
    const double lhs = (g_eval<double>(a, st, link) - g_eval<double>(b, st, link)).dot(diff);
    ASSERT_GE(lhs, k1 * diff.dot(st.gram().V() * diff) * (1 - 1e-9));
  }
}

TEST(GlmConfRadius, Example) {
  EXPECT_NEAR(glm_conf_radius(1, 1, 1, 2, 1, 2), 3.8284271247461903, 1e-15);
  EXPECT_THROW(glm_conf_radius(1, 1, 1, 0, 1, 0), InvalidArgument);
}

TEST(GlmExploration, LinkRatio) {
  EXPECT_EQ(glm_exploration_length(2, 1000000, 1.0, 1.0, 1.0), pure_exploration_length(2, 1000000, 1.0));
  EXPECT_EQ(glm_exploration_length(2, 1000000, 1.0, 0.5, 1.0),
            exploration_length(2, 1000000, 1.0, 10.0, 2.0));
}

TEST(GlmExploration, LogisticDefaultTooLongForMillionRounds) {
  const double k1 = link_constants(LinkFunction::logistic(), 1, 1).k1;
  try {
    glm_exploration_length(2, 1000000, 1.0, k1, 1.0);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("1475868"), std::string::npos) << e.what();
  }
}

TEST(IcGlmUcb, IdentityLinkReducesToLinear) {
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    LinearConfig c = glm_cfg(seed, "identity");
    c.T = 3000;
    const auto g = run_ic_glmucb(c);
    const auto l = run_ic_linucb(c);
    ASSERT_EQ(g.trace.size(), l.trace.size());
    for (std::size_t i = 0; i < g.trace.size(); ++i) {
      ASSERT_EQ(g.trace[i].action_index, l.trace[i].action_index) << i;
      ASSERT_NEAR(g.trace[i].cum_regret, l.trace[i].cum_regret, 1e-9) << i;
    }
  }
}

TEST(IcGlmUcb, DeterministicAndSynced) {
  const LinearConfig c = glm_cfg(5, "logistic");
  const auto a = run_ic_glmucb(c);
  const auto b = run_ic_glmucb(c);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.internals.mirror_mismatches, 0);
  EXPECT_EQ(a.internals.bits_sent, c.B * (c.T - a.internals.T_bar));
  EXPECT_NEAR(a.internals.k1, 0.19661193324148185, 1e-15);
}

TEST(IcGlmUcb, ExploitationBeatsExploration) {
  double explore_rate = 0, exploit_rate = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    LinearConfig c = glm_cfg(10 + seed, "logistic");
    c.T = 6000;
    const auto run = run_ic_glmucb(c);
    const auto& tr = run.trace;
    const auto tb = static_cast<std::size_t>(run.internals.T_bar);
    ASSERT_LT(tb + 100, tr.size());
    const std::size_t mid = (tb + tr.size()) / 2;
    explore_rate += tr[tb - 1].cum_regret / static_cast<double>(tb);
    exploit_rate += (tr.back().cum_regret - tr[mid - 1].cum_regret) /
                    static_cast<double>(tr.size() - mid);
  }
  EXPECT_LT(exploit_rate, 0.25 * explore_rate);
}

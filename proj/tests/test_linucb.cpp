#include <gtest/gtest.h>

#include <cmath>

#include "bitbandit/linucb.hpp"
#include "bitbandit/rng.hpp"
#include "bitbandit/schedule.hpp"
#include "oracles.hpp"

using namespace bitbandit;

namespace {

LinearConfig small_cfg(std::uint64_t seed) {
  LinearConfig c;
  c.d = 2;
  c.T = 20000;
  c.B = 12;
  c.c_explore = 3.0;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Beta, Examples) {
  EXPECT_EQ(beta_sqrt(4.0, 1.5, 1.0, 2, 0, 1), 3.0);
  EXPECT_NEAR(beta_sqrt(1, 1, 0.01, 2, 1000, 1), 5.652263166905534, 1e-14);
  for (double T : {10.0, 1e3, 1e6}) {
    EXPECT_NEAR(beta_sqrt(1, 1, 1 / T, 3, T, 1),
                static_cast<double>(oracle::beta_sqrt(1, 1, 1 / static_cast<oracle::LD>(T), 3, T, 1)),
                1e-13);
  }
}

TEST(Beta, Monotone) {
  double prev = 0;
  for (double T = 1; T < 1e7; T *= 3) {
    const double b = beta_sqrt(1, 1, 0.05, 2, T, 1);
    EXPECT_GE(b, prev);
    prev = b;
  }
  EXPECT_LE(beta_sqrt(1, 1, 0.05, 2, 100, 1), beta_sqrt(1, 1, 0.05, 3, 100, 1));
  EXPECT_LE(beta_sqrt(1, 1, 0.05, 2, 100, 1), beta_sqrt(1, 1, 0.01, 2, 100, 1));
}

TEST(LeastSquares, Examples) {
  LsState<double> s(1, 1.0);
  EXPECT_EQ(s.theta_hat()[0], 0.0);
  VectorXd a(1);
  a << 1;
  auto s1 = ls_update(s, a, 2.0);
  EXPECT_EQ(s1.V()(0, 0), 2.0);
  EXPECT_EQ(s1.theta_hat()[0], 1.0);
  auto s2 = ls_update(ls_update(s, a, 1.0), a, 1.0);
  EXPECT_NEAR(s2.theta_hat()[0], 2.0 / 3.0, 1e-15);
}

TEST(LeastSquares, InvariantsAndBatchAgreement) {
  Rng rng(21);
  const int d = 4;
  LsState<double> s(d, 0.5);
  std::vector<VectorXd> A;
  std::vector<double> y;
  for (int i = 0; i < 3000; ++i) {
    const VectorXd a = sample_sphere(d, rng);
    const double r = rng.normal();
    s.update(a, r);
    A.push_back(a);
    y.push_back(r);
    ASSERT_LE((s.V() * s.theta_hat() - s.b()).norm(), 1e-8 * (1 + s.b().norm()));
  }
  EXPECT_GE(s.gram().lambda_min(), 0.5);
  const VectorXd ref = oracle::ridge(A, y, 0.5);
  EXPECT_LE((s.theta_hat() - ref).norm(), 1e-8 * ref.norm());
}

TEST(Exploration, Examples) {
  EXPECT_EQ(pure_exploration_length(2, 1000000, 1.0), 290174);
  EXPECT_EQ(pure_exploration_length(2, 1000000, 1.0, 0.0), 0);
  EXPECT_THROW(pure_exploration_length(2, 10000, 1.0), ConfigError);
  EXPECT_EQ(exploration_length(2, 1000000, 1.0, 10.0, 2.0), 580347);
}

TEST(ConfRadius, Examples) {
  EXPECT_EQ(conf_radius(2.5, 1, 7, 1, 0.0), 2.5);
  EXPECT_NEAR(conf_radius(1, 1, 2, 1, 3), 5.242640687119285, 1e-14);
  double prev = conf_radius(1, 1, 50, 1, 4.0);
  for (double q = 3.9; q >= 0; q -= 0.1) {
    const double r = conf_radius(1, 1, 50, 1, q);
    EXPECT_LE(r, prev);
    EXPECT_GE(r, 1.0);
    prev = r;
  }
}

TEST(UcbAction, Examples) {
  const MatrixXd E = MatrixXd::Identity(2, 2);
  VectorXd c(2);
  c << 1, 0;
  ConfidenceEllipsoid<double> greedy{c, E, E, 0.0};
  EXPECT_EQ(ucb_action(greedy, E).first, 0);

  ConfidenceEllipsoid<double> tie{VectorXd::Zero(2), E, E, 1.0};
  EXPECT_EQ(ucb_action(tie, E).first, 0);

  MatrixXd S(2, 2);
  S << 2, 0, 0, 1;
  ConfidenceEllipsoid<double> ell{c, S, S.inverse(), 1.0};
  EXPECT_EQ(ucb_action(ell, E).first, 0);
  EXPECT_NEAR(optimistic_value(ell, E.col(0)), 1.7071067811865475, 1e-15);
  EXPECT_NEAR(optimistic_value(ell, E.col(1)), 1.0, 1e-15);

  EXPECT_THROW(ucb_action(tie, MatrixXd(2, 0)), InvalidArgument);
}

TEST(IcLinUcb, MinimalHorizonHasOneDecisionRound) {
  const double base = 2 * std::sqrt(1000.0) * std::log(2000.0);
  LinearConfig c = small_cfg(1);
  c.T = 1000;
  c.c_explore = 997.5 / base;
  ASSERT_EQ(pure_exploration_length(2, 1000, 1.0, c.c_explore), 998);
  const LinearRun run = run_ic_linucb(c);
  ASSERT_EQ(run.trace.size(), 1000u);
  int phase2 = 0;
  for (const auto& r : run.trace) phase2 += r.phase == 2;
  EXPECT_EQ(phase2, 1);
  EXPECT_EQ(run.internals.decision_rounds, 1);
  EXPECT_EQ(run.internals.transmissions, 2);
}

TEST(IcLinUcb, TheoryCapacityRuns) {
  LinearConfig c = small_cfg(2);
  c.B = 12;  // 6d
  c.delta = 0;
  LinearRun run;
  ASSERT_NO_THROW(run = run_ic_linucb(c));
  EXPECT_EQ(c.resolved_delta(), 1.0 / 20000);
}

TEST(IcLinUcb, CapacityTooSmallIsRejected) {
  LinearConfig c = small_cfg(2);
  c.B = 2;
  EXPECT_THROW(run_ic_linucb(c), ConfigError);
}

TEST(IcLinUcb, Deterministic) {
  const LinearConfig c = small_cfg(3);
  EXPECT_EQ(run_ic_linucb(c).trace, run_ic_linucb(c).trace);
}

TEST(IcLinUcb, MirrorsBitsAndRegretShape) {
  const LinearConfig c = small_cfg(4);
  const LinearRun run = run_ic_linucb(c);
  const auto& in = run.internals;
  EXPECT_EQ(in.mirror_mismatches, 0);
  EXPECT_EQ(in.bits_sent, c.B * (c.T - in.T_bar));
  EXPECT_EQ(run.trace.back().bits_cum, in.bits_sent);

  const MatrixXd cands = make_candidates(c);
  const VectorXd th = make_theta_star(c);
  double max_gap = 0;
  for (Eigen::Index k = 0; k < cands.cols(); ++k) {
    for (Eigen::Index j = 0; j < cands.cols(); ++j) {
      max_gap = std::max(max_gap, th.dot(cands.col(k)) - th.dot(cands.col(j)));
    }
  }
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    const auto& r = run.trace[i];
    if (i > 0) {
      ASSERT_GE(r.cum_regret, run.trace[i - 1].cum_regret);
    }
    if (r.phase == 2) {
      ASSERT_LE(r.inst_regret, max_gap + 1e-12);
    }
    const std::int64_t sends = r.t > in.T_bar ? r.t - in.T_bar : 0;
    ASSERT_EQ(r.bits_cum, c.B * sends);
  }
}

TEST(IcLinUcb, OverflowKeepsMirrorsInStep) {
  LinearConfig c = small_cfg(5);
  c.noise_sd = 3000.0;
  const LinearRun run = run_ic_linucb(c);
  EXPECT_GT(run.internals.overflow_events, 0);
  EXPECT_EQ(run.internals.mirror_mismatches, 0);
  int flagged = 0;
  for (const auto& r : run.trace) flagged += r.overflow_flag;
  EXPECT_EQ(flagged, run.internals.overflow_events);
}

TEST(IcLinUcb, RadiusNeverBelowBaseline) {
  const double bs = beta_sqrt(1, 1, 1e-4, 2, 1e4, 1);
  auto s = QuantSchedule::start(10, 0.01, 0.5);
  for (int t = 2; t < 5000; ++t) {
    s = schedule_step(s);
    EXPECT_GE(conf_radius(bs, 1, t, 1, s.q), bs);
  }
}

TEST(IcLinUcb, LosslessMatchesBaseline) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    LinearConfig c = small_cfg(seed);
    c.T = 10000;
    c.c_explore = 2.0;
    c.codec = CodecKind::kIdentity;
    const auto ic = run_ic_linucb(c).trace;
    const auto base = run_linucb(c).trace;
    ASSERT_EQ(ic.size(), base.size());
    for (std::size_t i = 0; i < ic.size(); ++i) {
      TraceRow a = ic[i], b = base[i];
      a.bits_cum = b.bits_cum = 0;
      ASSERT_EQ(a, b) << "seed " << seed << " t " << a.t;
    }
  }
}

TEST(LinUcb, ZeroNoisePlateaus) {
  LinearConfig c = small_cfg(6);
  c.noise_sd = 0.0;
  c.T = 10000;
  c.c_explore = 2.0;
  MatrixXd cands(2, 4);
  cands << 1, 0, -1, 0, 0, 1, 0, -1;
  c.candidates = cands;
  VectorXd th(2);
  th << 0.8, 0.6;
  c.theta_star = th;
  const auto trace = run_linucb(c).trace;
  const double mid = trace[trace.size() / 2].cum_regret;
  for (std::size_t i = trace.size() / 2; i < trace.size(); ++i) {
    ASSERT_EQ(trace[i].cum_regret, mid);
  }
}

TEST(Diagnostics, MostRunsPassChecks) {
  const int runs = 200;
  int eig = 0, gap = 0, ovf = 0, cov = 0, all = 0;
  for (int s = 0; s < runs; ++s) {
    const LinearReport r = diagnostics_linucb(run_ic_linucb(small_cfg(1000 + s)).internals);
    eig += r.eigen_floor;
    gap += r.estimate_gap;
    ovf += r.no_overflow;
    cov += r.coverage;
    all += r.mirrors_synced && r.bits_exact;
  }
  EXPECT_GE(eig, 0.9 * runs);
  EXPECT_GE(gap, 0.9 * runs);
  EXPECT_GE(ovf, 0.9 * runs);
  EXPECT_GE(cov, 0.9 * runs);
  EXPECT_EQ(all, runs);
}

TEST(Diagnostics, LosslessCoverageIsClassicalEvent) {
  LinearConfig c = small_cfg(7);
  c.codec = CodecKind::kIdentity;
  const auto ic = run_ic_linucb(c);
  const auto base = run_linucb(c);
  EXPECT_EQ(ic.internals.coverage_misses, base.internals.coverage_misses);
  EXPECT_EQ(ic.internals.max_inflation_settled, 0.0);
}

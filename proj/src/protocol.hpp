#pragma once

// Lockstep agent/server loop shared by the linear and GLM variants. The two
// differ only in the agent's estimator, the environment, and the constants
// fed to the schedule and the confidence radius.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "bitbandit/channel.hpp"
#include "bitbandit/codebook.hpp"
#include "bitbandit/ellipsoid.hpp"
#include "bitbandit/env.hpp"
#include "bitbandit/least_squares.hpp"
#include "bitbandit/linucb.hpp"
#include "bitbandit/schedule.hpp"
#include "bitbandit/trace.hpp"

namespace bitbandit::detail {

inline constexpr std::int64_t kEigenCheckInterval = 1000;

struct ProtocolConstants {
  std::int64_t T_bar = 0;
  double beta_sqrt = 0;
  double f = 0;        // reported f(T); the gap diagnostic compares against it
  double f_sched = 0;  // f fed to the schedule (0 for the lossless surrogate)
  double q0 = 0;       // q at T̄ (0 for the lossless surrogate)
  double q0_nominal = 0;
  double k1 = 1, k2 = 1;
  std::function<double(double t, double q_t)> radius;
};

// Agent-side and server-side halves of the codec. The identity codec carries
// the exact innovation next to a dummy symbol.
class CodecEnd {
 public:
  CodecEnd(const NetCodebook<double>* cb) : cb_(cb) {}

  bool identity() const { return cb_ == nullptr; }

  Symbol encode(double p, const VectorXd& e, VectorXd& payload, CodecCounters& counters) const {
    if (identity()) {
      payload = e;
      ++counters.encodes;
      return {0};
    }
    return vector_encode(*cb_, p, e, &counters);
  }

  bool is_overflow(Symbol s) const { return !identity() && cb_->is_overflow(s); }

  // θ̂^(s) += ẽ; the overflow letter leaves it unchanged.
  void apply(VectorXd& theta_s, double p, Symbol s, const VectorXd& payload) const {
    if (identity()) {
      theta_s += payload;
      return;
    }
    if (auto e = vector_decode(*cb_, p, s)) theta_s += *e;
  }

 private:
  const NetCodebook<double>* cb_;
};

inline bool same_bits(const VectorXd& a, const VectorXd& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

// Estimator requirements: observe(a, y), estimate(t) -> const VectorXd&,
// gram() -> const GramState<double>&.
template <typename Env, typename Estimator>
LinearRun run_protocol(const LinearConfig& cfg, const ProtocolConstants& pc, Env& env,
                       Estimator& est, MatrixXd candidates, const NetCodebook<double>* cb,
                       const TraceSink& sink) {
  const int d = cfg.d;
  const std::int64_t T = cfg.T;
  const std::int64_t T_bar = pc.T_bar;

  LinearRun run;
  LinearInternals& in = run.internals;
  in.T = T;
  in.T_bar = T_bar;
  in.beta_sqrt = pc.beta_sqrt;
  in.f = pc.f;
  in.q0 = pc.q0_nominal;
  in.k1 = pc.k1;
  in.k2 = pc.k2;
  in.B = cfg.B;
  in.codebook_size = cb ? cb->size() : 0;
  in.T_tilde = pc.f > 0 ? settle_rounds(pc.q0_nominal, pc.f, cfg.epsilon) : 2;
  const double log_dlt = std::log(static_cast<double>(d) * cfg.L * static_cast<double>(T));
  in.eigen_floor_threshold = cfg.c_explore / 2.0 * (pc.k2 / pc.k1) * cfg.L * cfg.L *
                             std::sqrt(static_cast<double>(T)) * log_dlt;
  in.inflation_bound = 4.0 * std::sqrt(pc.beta_sqrt * pc.beta_sqrt / log_dlt);
  in.lambda_min_observed = std::numeric_limits<double>::infinity();
  if (!sink) run.trace.reserve(static_cast<std::size_t>(T));

  ActionSet A(std::move(candidates), cfg.L);
  double best = best_mean(env, A);
  Rng explore = derive_stream(cfg.seed, Stream::kExploration);

  Channel channel(cfg.B);
  CodecEnd codec(cb);
  CodecCounters counters;

  // Server state.
  GramState<double> server_gram(d, cfg.lambda);
  QuantSchedule server_sched = QuantSchedule::start(pc.q0, pc.f_sched, cfg.epsilon);
  ConfidenceEllipsoid<double> ell{VectorXd::Zero(d), server_gram.V(), server_gram.V_inv(), 0.0};

  // Agent state: estimator plus its copy of θ̂^(s) and of the schedule.
  VectorXd mirror = VectorXd::Zero(d);
  QuantSchedule agent_sched = QuantSchedule::start(pc.q0, pc.f_sched, cfg.epsilon);
  VectorXd prev_estimate;

  // The wire between the two halves.
  Symbol wire{};
  VectorXd payload = VectorXd::Zero(d);
  bool pending = false;

  VectorXd e(d);
  double cum = 0;
  const double lambda = cfg.lambda;
  const double L2 = cfg.L * cfg.L;

  for (std::int64_t t = 1; t <= T; ++t) {
    TraceRow row;
    row.run_id = cfg.run_id;
    row.seed = cfg.seed;
    row.t = t;
    const bool explore_phase = t <= T_bar + 1;
    row.phase = explore_phase ? 1 : 2;

    VectorXd a;
    if (explore_phase) {
      a = sample_sphere(d, explore);
    } else {
      // Server: decode σ_{t-1} with p_{t-1}, then act on C_t.
      server_sched = schedule_step(server_sched);
      if (pending) codec.apply(ell.center, server_sched.p, wire, payload);
      pending = false;
      if (!same_bits(ell.center, mirror)) ++in.mirror_mismatches;
      const double q_t = schedule_step(server_sched).q;

      if (cfg.regenerate_actions) {
        MatrixXd c = A.candidates();
        cfg.regenerate_actions(t, c);
        A = ActionSet(std::move(c), cfg.L);
        best = best_mean(env, A);
      }
      ell.shape = server_gram.V();
      ell.shape_inv = server_gram.V_inv();
      ell.radius = pc.radius(static_cast<double>(t), q_t) / pc.k1;
      row.coverage_flag = ell.contains(env.theta_star()) ? 1 : 0;
      ++in.decision_rounds;
      if (!row.coverage_flag) ++in.coverage_misses;

      const Eigen::Index k = ucb_index(ell, A.candidates());
      row.action_index = k;
      a = A.candidates().col(k);

      if (t >= T_bar + in.T_tilde) {
        const double infl = std::sqrt(lambda + static_cast<double>(t - 1) * L2) * q_t;
        in.max_inflation_settled = std::max(in.max_inflation_settled, infl);
      }
    }
    server_gram.update(a);

    const double y = env.observe(a);
    row.reward = y;
    row.inst_regret = std::max(0.0, best - env.mean_reward(a));
    cum += row.inst_regret;
    row.cum_regret = cum;

    // Agent.
    est.observe(a, y);
    if (t >= T_bar && (t == T_bar || t == T || (t - T_bar) % kEigenCheckInterval == 0)) {
      const double lm = est.gram().lambda_min();
      if (t == T_bar) in.lambda_min_at_T_bar = lm;
      in.lambda_min_observed = std::min(in.lambda_min_observed, lm);
    }
    if (t >= T_bar) {
      const VectorXd& th = est.estimate(t);
      if (t > T_bar && prev_estimate.size() == d) {
        in.max_estimate_gap = std::max(in.max_estimate_gap, (th - prev_estimate).norm());
      }
      prev_estimate = th;
    }
    if (t >= T_bar + 1) {
      agent_sched = schedule_step(agent_sched);
      e = est.estimate(t) - mirror;
      const std::int64_t overflows_before = counters.overflows;
      wire = channel.transmit(codec.encode(agent_sched.p, e, payload, counters));
      pending = true;
      codec.apply(mirror, agent_sched.p, wire, payload);
      row.overflow_flag = (counters.overflows > overflows_before) ? 1 : 0;
    } else {
      channel.no_transmission();
    }
    row.bits_cum = channel.bits_sent();

    if (sink) {
      sink(row);
    } else {
      run.trace.push_back(row);
    }
  }

  if (server_gram.V() != est.gram().V()) ++in.mirror_mismatches;
  in.overflow_events = counters.overflows;
  in.coverage_violations = counters.coverage_violations;
  in.transmissions = channel.transmissions();
  in.bits_sent = channel.bits_sent();
  in.final_cum_regret = cum;
  if (!std::isfinite(in.lambda_min_observed)) in.lambda_min_observed = 0;
  return run;
}

}  // namespace bitbandit::detail

#include "bitbandit/mab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "bitbandit/channel.hpp"
#include "bitbandit/env.hpp"
#include "bitbandit/rng.hpp"
#include "bitbandit/scalar_codec.hpp"

namespace bitbandit {
namespace {

void validate(const MabConfig& cfg) {
  if (cfg.means.size() < 2) throw ConfigError("need at least 2 arms");
  if (cfg.T < static_cast<std::int64_t>(cfg.means.size())) throw ConfigError("T must be >= number of arms");
  if (cfg.B < 1 || cfg.B > 52) throw ConfigError("B must be in [1, 52] for the scalar codec");
}

template <typename IndexFn>
std::size_t argmax_index(const std::vector<ArmState>& arms, IndexFn index) {
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const double v = index(arms[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

}  // namespace

double ic_ucb_index(const ArmState& arm) {
  if (arm.n < 1) throw InvalidArgument("ic_ucb_index: arm has not been played");
  return arm.theta_s + arm.schedule.q + arm.schedule.f;
}

double ucb_index(const ArmState& arm) {
  if (arm.n < 1) throw InvalidArgument("ucb_index: arm has not been played");
  return arm.theta_a + arm.schedule.f;
}

void advance_play(ArmState& arm) {
  ++arm.n;
  if (arm.n > 1) arm.schedule = scalar_schedule_step(arm.schedule);
}

std::optional<Symbol> mab_agent_round(ArmState& arm, double y, int B) {
  advance_play(arm);
  arm.sum_y += y;
  arm.theta_a = arm.sum_y / static_cast<double>(arm.n);
  const auto sym = scalar_encode(arm.theta_a - arm.theta_s, arm.schedule.p, B);
  if (sym) arm.theta_s += scalar_decode(*sym, arm.schedule.p, B);
  return sym;
}

void mab_server_round(ArmState& arm, std::optional<Symbol> sym, int B) {
  advance_play(arm);
  if (sym) arm.theta_s += scalar_decode(*sym, arm.schedule.p, B);
}

MabRun run_ic_ucb(const MabConfig& cfg, const TraceSink& sink) {
  validate(cfg);
  MabEnv env(cfg.means, derive_stream(cfg.seed, Stream::kNoise), cfg.m, cfg.noise_sd);
  const std::size_t K = env.arms();
  const double Td = static_cast<double>(cfg.T);
  const ScalarSchedule start = cfg.lossless ? ScalarSchedule::start_with_gamma(0.0, env.m(), Td)
                                            : ScalarSchedule::start(cfg.B, env.m(), Td);

  MabRun run;
  MabInternals& in = run.internals;
  in.T = cfg.T;
  in.m = env.m();
  in.pulls.assign(K, 0);
  if (!sink) run.trace.reserve(static_cast<std::size_t>(cfg.T));

  std::vector<ArmState> agent(K, ArmState::fresh(start));
  std::vector<ArmState> server(K, ArmState::fresh(start));
  Channel channel(cfg.B);
  double cum = 0;

  for (std::int64_t t = 1; t <= cfg.T; ++t) {
    TraceRow row;
    row.run_id = cfg.run_id;
    row.seed = cfg.seed;
    row.t = t;
    const bool init = t <= static_cast<std::int64_t>(K);
    row.phase = init ? 1 : 2;
    const std::size_t arm = init ? static_cast<std::size_t>(t - 1) : argmax_index(server, ic_ucb_index);

    const double y = env.observe(arm);
    row.action_index = static_cast<std::int64_t>(env.original_index(arm));
    row.reward = y;
    row.inst_regret = instant_regret(env, arm);
    cum += row.inst_regret;
    row.cum_regret = cum;
    ++in.pulls[env.original_index(arm)];
    if (arm != 0) ++in.suboptimal_pulls;

    ArmState& a = agent[arm];
    ArmState& s = server[arm];
    if (cfg.lossless) {
      advance_play(a);
      a.sum_y += y;
      a.theta_a = a.sum_y / static_cast<double>(a.n);
      const double e = a.theta_a - a.theta_s;
      a.theta_s += e;
      channel.transmit(Symbol{0});
      advance_play(s);
      s.theta_s += e;
    } else {
      const auto sym = mab_agent_round(a, y, cfg.B);
      if (sym) {
        channel.transmit(*sym);
        if (std::abs(a.theta_a - a.theta_s) > a.schedule.q) ++in.decode_bound_violations;
      } else {
        channel.no_transmission();
        ++in.silent_rounds;
        row.overflow_flag = 1;
      }
      mab_server_round(s, sym, cfg.B);
      if (a.schedule.q > scalar_envelope(cfg.B, env.m(), Td, a.schedule.k)) ++in.envelope_violations;
    }
    if (a.theta_s != s.theta_s || a.n != s.n) ++in.mirror_mismatches;
    row.bits_cum = channel.bits_sent();

    if (!init) {
      bool covered = true;
      for (std::size_t i = 0; i < K && covered; ++i) {
        const ArmState& si = server[i];
        covered = std::abs(env.means()[i] - si.theta_s) <= si.schedule.q + si.schedule.f;
      }
      row.coverage_flag = covered ? 1 : 0;
    }

    if (sink) {
      sink(row);
    } else {
      run.trace.push_back(row);
    }
  }
  in.transmissions = channel.transmissions();
  in.bits_sent = channel.bits_sent();
  in.final_cum_regret = cum;
  return run;
}

MabRun run_ucb(const MabConfig& cfg, const TraceSink& sink) {
  validate(cfg);
  MabEnv env(cfg.means, derive_stream(cfg.seed, Stream::kNoise), cfg.m, cfg.noise_sd);
  const std::size_t K = env.arms();
  const double Td = static_cast<double>(cfg.T);
  const ScalarSchedule start = ScalarSchedule::start_with_gamma(0.0, env.m(), Td);

  MabRun run;
  MabInternals& in = run.internals;
  in.T = cfg.T;
  in.m = env.m();
  in.pulls.assign(K, 0);
  if (!sink) run.trace.reserve(static_cast<std::size_t>(cfg.T));

  std::vector<ArmState> arms(K, ArmState::fresh(start));
  double cum = 0;
  for (std::int64_t t = 1; t <= cfg.T; ++t) {
    TraceRow row;
    row.run_id = cfg.run_id;
    row.seed = cfg.seed;
    row.t = t;
    const bool init = t <= static_cast<std::int64_t>(K);
    row.phase = init ? 1 : 2;
    const std::size_t arm = init ? static_cast<std::size_t>(t - 1) : argmax_index(arms, ucb_index);

    const double y = env.observe(arm);
    row.action_index = static_cast<std::int64_t>(env.original_index(arm));
    row.reward = y;
    row.inst_regret = instant_regret(env, arm);
    cum += row.inst_regret;
    row.cum_regret = cum;
    ++in.pulls[env.original_index(arm)];
    if (arm != 0) ++in.suboptimal_pulls;

    ArmState& a = arms[arm];
    advance_play(a);
    a.sum_y += y;
    a.theta_a = a.sum_y / static_cast<double>(a.n);
    a.theta_s = a.theta_a;

    if (!init) {
      bool covered = true;
      for (std::size_t i = 0; i < K && covered; ++i) {
        covered = std::abs(env.means()[i] - arms[i].theta_a) <= arms[i].schedule.f;
      }
      row.coverage_flag = covered ? 1 : 0;
    }
    if (sink) {
      sink(row);
    } else {
      run.trace.push_back(row);
    }
  }
  in.final_cum_regret = cum;
  return run;
}

}  // namespace bitbandit

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bitbandit/common.hpp"
#include "bitbandit/schedule.hpp"
#include "bitbandit/trace.hpp"

namespace bitbandit {

// Per-arm state. The agent uses every field; the server's copy only tracks
// n, theta_s and the schedule. After the n-th play, schedule.k == n.
struct ArmState {
  std::int64_t n = 0;
  double sum_y = 0;
  double theta_a = 0;
  double theta_s = 0;
  ScalarSchedule schedule;

  static ArmState fresh(const ScalarSchedule& start) {
    ArmState s;
    s.schedule = start;
    return s;
  }
};

// θ̂^(s) + q_n + f_n. Throws InvalidArgument for an unplayed arm.
double ic_ucb_index(const ArmState& arm);

// Classical index θ̂^(a) + f_n.
double ucb_index(const ArmState& arm);

// Advances play count and schedule for one more play of this arm.
void advance_play(ArmState& arm);

// Agent side of one play: running mean, innovation against p_n, and the
// local mirror update. nullopt means the agent stays silent (|e| > p_n).
std::optional<Symbol> mab_agent_round(ArmState& arm, double y, int B);

// Server side of the same play.
void mab_server_round(ArmState& arm, std::optional<Symbol> sym, int B);

struct MabConfig {
  std::vector<double> means;
  double m = 0;  // ≤ 0: max(1, max |θ_i|)
  int B = 1;
  std::int64_t T = 10000;
  std::uint64_t seed = 0;
  std::int64_t run_id = 0;
  double noise_sd = 1.0;
  // γ = 0 with the exact innovation on the wire: the infinite-capacity limit.
  bool lossless = false;
};

struct MabInternals {
  std::int64_t T = 0;
  double m = 0;
  std::vector<std::int64_t> pulls;  // by original arm index
  std::int64_t suboptimal_pulls = 0;
  std::int64_t transmissions = 0;
  std::int64_t silent_rounds = 0;
  std::int64_t bits_sent = 0;
  std::int64_t mirror_mismatches = 0;
  std::int64_t decode_bound_violations = 0;  // |θ̂^(a) − θ̂^(s)| > q_n after a send
  std::int64_t envelope_violations = 0;
  double final_cum_regret = 0;
};

struct MabRun {
  std::vector<TraceRow> trace;
  MabInternals internals;
};

MabRun run_ic_ucb(const MabConfig& cfg, const TraceSink& sink = {});
MabRun run_ucb(const MabConfig& cfg, const TraceSink& sink = {});

}  // namespace bitbandit

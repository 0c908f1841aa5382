#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bitbandit {

// One simulated round. action_index is -1 for actions outside the candidate
// set (exploration-phase sphere draws). coverage_flag is 1 when θ* lies in
// the server's confidence set for this round, 0 otherwise (always 0 before
// the server has a set).
struct TraceRow {
  std::int64_t run_id = 0;
  std::uint64_t seed = 0;
  std::int64_t t = 0;
  std::int64_t action_index = -1;
  double reward = 0;
  double inst_regret = 0;
  double cum_regret = 0;
  std::int64_t bits_cum = 0;
  int overflow_flag = 0;
  int coverage_flag = 0;
  int phase = 1;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

using TraceSink = std::function<void(const TraceRow&)>;

}  // namespace bitbandit

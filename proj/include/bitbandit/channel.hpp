#pragma once

#include <cstdint>

#include "bitbandit/common.hpp"

namespace bitbandit {

// Noiseless B-bit uplink with bit accounting. The downlink (server → agent
// action) is lossless and unmetered, so it has no model here.
class Channel {
 public:
  explicit Channel(int B);

  int bits_per_round() const { return B_; }
  std::int64_t bits_sent() const { return bits_sent_; }
  std::int64_t transmissions() const { return transmissions_; }
  std::int64_t rounds_used() const { return rounds_used_; }

  // Returns sym unchanged. Throws CapacityError if sym ≥ 2^B.
  Symbol transmit(Symbol sym);

  // Round in which the agent stays silent.
  void no_transmission();

 private:
  int B_;
  std::int64_t bits_sent_ = 0;
  std::int64_t transmissions_ = 0;
  std::int64_t rounds_used_ = 0;
};

}  // namespace bitbandit

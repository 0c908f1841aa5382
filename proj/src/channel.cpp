#include "bitbandit/channel.hpp"

#include <string>

namespace bitbandit {

Channel::Channel(int B) : B_(B) {
  if (B < 1) throw ConfigError("channel capacity B must be >= 1");
}

Symbol Channel::transmit(Symbol sym) {
  if (B_ < 64 && sym.value >= (std::uint64_t{1} << B_)) {
    throw CapacityError("symbol " + std::to_string(sym.value) + " does not fit a " +
                        std::to_string(B_) + "-bit alphabet");
  }
  bits_sent_ += B_;
  ++transmissions_;
  ++rounds_used_;
  return sym;
}

void Channel::no_transmission() { ++rounds_used_; }

}  // namespace bitbandit

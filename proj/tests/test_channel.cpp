#include <gtest/gtest.h>

#include "bitbandit/channel.hpp"
#include "bitbandit/codebook.hpp"

using namespace bitbandit;

TEST(Channel, TransmitCountsBits) {
  Channel ch(1);
  EXPECT_EQ(ch.transmit(Symbol{0}).value, 0u);
  EXPECT_EQ(ch.bits_sent(), 1);
  EXPECT_EQ(ch.transmissions(), 1);
}

TEST(Channel, RejectsOversizedSymbol) {
  Channel ch(2);
  EXPECT_THROW(ch.transmit(Symbol{4}), CapacityError);
  EXPECT_NO_THROW(ch.transmit(Symbol{3}));
}

TEST(Channel, NetSymbolsFitAtSixBitsPerDimension) {
  for (int d = 1; d <= 3; ++d) {
    const auto cb = build_unit_net<double>(d, 0.5, 0);
    Channel ch(6 * d);
    for (Eigen::Index j = 0; j <= cb.size(); ++j) {
      EXPECT_NO_THROW(ch.transmit(Symbol{static_cast<std::uint64_t>(j)}));
    }
  }
}

TEST(Channel, SilentRounds) {
  Channel ch(3);
  ch.no_transmission();
  EXPECT_EQ(ch.bits_sent(), 0);
  for (int i = 1; i < 10; ++i) ch.no_transmission();
  EXPECT_EQ(ch.rounds_used(), 10);
  ch.transmit(Symbol{5});
  ch.no_transmission();
  EXPECT_EQ(ch.bits_sent(), 3);
  EXPECT_EQ(ch.transmissions(), 1);
  EXPECT_EQ(ch.rounds_used(), 12);
}

TEST(Channel, RejectsZeroCapacity) { EXPECT_THROW(Channel(0), ConfigError); }

#pragma once

#include <optional>

#include "bitbandit/common.hpp"

namespace bitbandit {

// Uniform 2^B-bin quantizer on [-p, p]. Bins are half-open [left, right)
// except the last, which also takes +p. |e| > p yields no symbol: the agent
// stays silent that round.
std::optional<Symbol> scalar_encode(double e, double p, int B);

// Center of bin `sym`; |center - e| ≤ p / 2^B for the e that produced it.
double scalar_decode(Symbol sym, double p, int B);

}  // namespace bitbandit

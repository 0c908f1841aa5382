#include "bitbandit/scalar_codec.hpp"

#include <cmath>
#include <string>

namespace bitbandit {
namespace {

void check_params(double p, int B) {
  if (B < 1 || B > 52) throw InvalidArgument("scalar codec: B must be in [1, 52]");
  if (!(p > 0)) throw InvalidArgument("scalar codec: radius p must be positive");
}

}  // namespace

std::optional<Symbol> scalar_encode(double e, double p, int B) {
  check_params(p, B);
  if (!(std::abs(e) <= p)) return std::nullopt;
  const double bins = std::ldexp(1.0, B);
  const double width = 2.0 * p / bins;
  auto idx = static_cast<std::uint64_t>(std::floor((e + p) / width));
  const auto last = static_cast<std::uint64_t>(bins) - 1;
  if (idx > last) idx = last;
  return Symbol{idx};
}

double scalar_decode(Symbol sym, double p, int B) {
  check_params(p, B);
  const double bins = std::ldexp(1.0, B);
  if (static_cast<double>(sym.value) >= bins) {
    throw ProtocolError("scalar symbol " + std::to_string(sym.value) + " outside 2^B alphabet");
  }
  const double width = 2.0 * p / bins;
  return -p + (static_cast<double>(sym.value) + 0.5) * width;
}

}  // namespace bitbandit

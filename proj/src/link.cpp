#include "bitbandit/link.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "bitbandit/common.hpp"

namespace bitbandit {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

LinkFunction LinkFunction::identity() { return {Kind::kIdentity, "identity", 1.0}; }

LinkFunction LinkFunction::logistic() { return {Kind::kLogistic, "logistic", 1.0}; }

LinkFunction LinkFunction::scaled_logistic(double c) {
  if (!(c > 0) || !std::isfinite(c)) {
    throw InvalidArgument("scaled-logistic link needs a positive finite scale");
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), c);
  (void)ec;
  return {Kind::kScaledLogistic, "scaled-logistic:" + std::string(buf, end), c};
}

LinkFunction LinkFunction::custom(std::string name, std::function<double(double)> mu,
                                  std::function<double(double)> mu_dot,
                                  std::function<double(double)> potential) {
  LinkFunction link(Kind::kCustom, std::move(name), 1.0);
  link.mu_fn_ = std::move(mu);
  link.mu_dot_fn_ = std::move(mu_dot);
  link.potential_fn_ = std::move(potential);
  return link;
}

LinkFunction LinkFunction::parse(std::string_view name) {
  if (name == "identity") return identity();
  if (name == "logistic") return logistic();
  constexpr std::string_view prefix = "scaled-logistic:";
  if (name.substr(0, prefix.size()) == prefix) {
    const auto rest = name.substr(prefix.size());
    double c = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), c);
    if (ec != std::errc{} || ptr != rest.data() + rest.size()) {
      throw ConfigError("bad scaled-logistic scale in link '" + std::string(name) + "'");
    }
    return scaled_logistic(c);
  }
  throw ConfigError("unknown link '" + std::string(name) + "'");
}

double LinkFunction::mu(double z) const {
  switch (kind_) {
    case Kind::kIdentity: return z;
    case Kind::kLogistic: return sigmoid(z);
    case Kind::kScaledLogistic: return sigmoid(scale_ * z);
    case Kind::kCustom: return mu_fn_(z);
  }
  return 0;
}

double LinkFunction::mu_dot(double z) const {
  switch (kind_) {
    case Kind::kIdentity: return 1.0;
    case Kind::kLogistic: {
      const double s = sigmoid(z);
      return s * (1.0 - s);
    }
    case Kind::kScaledLogistic: {
      const double s = sigmoid(scale_ * z);
      return scale_ * s * (1.0 - s);
    }
    case Kind::kCustom: return mu_dot_fn_(z);
  }
  return 0;
}

double LinkFunction::potential(double z) const {
  switch (kind_) {
    case Kind::kIdentity: return 0.5 * z * z;
    case Kind::kLogistic: return softplus(z);
    case Kind::kScaledLogistic: return softplus(scale_ * z) / scale_;
    case Kind::kCustom: return potential_fn_(z);
  }
  return 0;
}

LinkConstants link_constants_grid(const LinkFunction& link, double L, double M, int points) {
  if (points < 2) throw InvalidArgument("link_constants_grid: need at least 2 points");
  const double zmax = L * M;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double z = -zmax + 2.0 * zmax * i / (points - 1);
    const double v = link.mu_dot(z);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  LinkConstants c{std::min(1.0, lo), std::max(1.0, hi)};
  if (!(c.k1 > 0)) {
    throw ConfigError("link '" + link.name() + "' violates the positive-derivative assumption (k1 <= 0)");
  }
  return c;
}

LinkConstants link_constants(const LinkFunction& link, double L, double M) {
  const double zmax = L * M;
  switch (link.kind()) {
    case LinkFunction::Kind::kIdentity:
      return {1.0, 1.0};
    case LinkFunction::Kind::kLogistic:
    case LinkFunction::Kind::kScaledLogistic: {
      // μ̇ is even and decreasing in |z|: infimum at the edge, supremum c/4 at 0.
      const double c = link.scale();
      const double k1 = std::min(1.0, link.mu_dot(zmax));
      if (!(k1 > 0)) {
        throw ConfigError("link '" + link.name() + "' has vanishing derivative on |z| <= L*M");
      }
      return {k1, std::max(1.0, c / 4.0)};
    }
    case LinkFunction::Kind::kCustom:
      return link_constants_grid(link, L, M);
  }
  throw InternalError("unreachable link kind");
}

}  // namespace bitbandit

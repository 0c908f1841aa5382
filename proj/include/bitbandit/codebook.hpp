#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bitbandit/common.hpp"
#include "bitbandit/env.hpp"
#include "bitbandit/rng.hpp"

namespace bitbandit {

inline constexpr std::int64_t kDefaultStopRejections = 10000;

// A fixed ε-net of the closed unit ball, one center per column. Every round's
// net of B(0, p) is this one scaled by p, so agent and server only need to
// agree on (d, ε, seed, construction) once.
//
// Symbols 0..size()-1 name centers; the value size() is the overflow letter.
template <typename Scalar>
class NetCodebook {
 public:
  enum class Kind : std::uint32_t { kGreedy = 0, kGrid = 1 };

  NetCodebook(Matrix<Scalar> centers, Scalar epsilon, std::uint64_t seed, Kind kind)
      : centers_(std::move(centers)), epsilon_(epsilon), seed_(seed), kind_(kind) {
    if (centers_.cols() == 0) throw InvalidArgument("codebook needs at least one center");
    if (!(epsilon_ > 0 && epsilon_ < 1)) throw InvalidArgument("codebook epsilon must be in (0,1)");
  }

  Eigen::Index dim() const { return centers_.rows(); }
  Eigen::Index size() const { return centers_.cols(); }
  Scalar epsilon() const { return epsilon_; }
  std::uint64_t seed() const { return seed_; }
  Kind kind() const { return kind_; }
  const Matrix<Scalar>& centers() const { return centers_; }

  Symbol overflow_symbol() const { return {static_cast<std::uint64_t>(centers_.cols())}; }
  bool is_overflow(Symbol s) const { return s == overflow_symbol(); }

  // Index and squared distance of the center nearest to u (unit scale).
  // Ties go to the lowest index.
  std::pair<Eigen::Index, Scalar> nearest(const Vector<Scalar>& u) const {
    Eigen::Index best = 0;
    Scalar best_d2 = std::numeric_limits<Scalar>::infinity();
    const Eigen::Index d = centers_.rows();
    for (Eigen::Index j = 0; j < centers_.cols(); ++j) {
      Scalar d2 = 0;
      for (Eigen::Index i = 0; i < d; ++i) {
        const Scalar diff = u[i] - centers_(i, j);
        d2 += diff * diff;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    return {best, best_d2};
  }

  // True when some center lies within ε of u (unit scale).
  bool covers(const Vector<Scalar>& u) const {
    const Scalar eps2 = epsilon_ * epsilon_;
    const Eigen::Index d = centers_.rows();
    for (Eigen::Index j = 0; j < centers_.cols(); ++j) {
      Scalar d2 = 0;
      for (Eigen::Index i = 0; i < d && d2 <= eps2; ++i) {
        const Scalar diff = u[i] - centers_(i, j);
        d2 += diff * diff;
      }
      if (d2 <= eps2) return true;
    }
    return false;
  }

  friend bool operator==(const NetCodebook& a, const NetCodebook& b) {
    return a.epsilon_ == b.epsilon_ && a.seed_ == b.seed_ &&
           a.centers_.rows() == b.centers_.rows() && a.centers_.cols() == b.centers_.cols() &&
           a.centers_ == b.centers_;
  }

 private:
  Matrix<Scalar> centers_;
  Scalar epsilon_;
  std::uint64_t seed_;
  Kind kind_;
};

// Encoder-side counters. A coverage violation is an in-ball innovation whose
// nearest center is farther than εp; it is still encoded to that center.
struct CodecCounters {
  std::int64_t encodes = 0;
  std::int64_t overflows = 0;
  std::int64_t coverage_violations = 0;
};

template <typename Scalar>
Vector<Scalar> sample_unit_ball(Eigen::Index d, Rng& rng) {
  const VectorXd dir = sample_sphere(d, rng);
  const double r = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return (r * dir).template cast<Scalar>();
}

// Seeded greedy packing: draw uniform points in the unit ball and keep any
// point farther than ε from every kept center, until `stop_rejections`
// consecutive draws are rejected. Then 10·(2/ε+1)^d probes are drawn and any
// uncovered probe becomes a center (it is > ε from all, so separation holds).
template <typename Scalar = double>
NetCodebook<Scalar> build_unit_net(Eigen::Index d, Scalar epsilon, std::uint64_t seed,
                                   std::int64_t stop_rejections = kDefaultStopRejections) {
  if (d < 1) throw InvalidArgument("build_unit_net: d must be >= 1");
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("build_unit_net: epsilon must be in (0,1)");
  if (stop_rejections < 1) throw InvalidArgument("build_unit_net: stop_rejections must be >= 1");

  Rng rng = derive_stream(seed, Stream::kCodebook);
  std::vector<Scalar> flat;
  Eigen::Index count = 0;
  const Scalar eps2 = epsilon * epsilon;

  auto separated = [&](const Vector<Scalar>& x) {
    for (Eigen::Index j = 0; j < count; ++j) {
      const Scalar* c = flat.data() + j * d;
      Scalar d2 = 0;
      for (Eigen::Index i = 0; i < d && d2 <= eps2; ++i) {
        const Scalar diff = x[i] - c[i];
        d2 += diff * diff;
      }
      if (d2 <= eps2) return false;
    }
    return true;
  };
  auto accept = [&](const Vector<Scalar>& x) {
    flat.insert(flat.end(), x.data(), x.data() + d);
    ++count;
  };

  for (std::int64_t rejections = 0; rejections < stop_rejections;) {
    const Vector<Scalar> x = sample_unit_ball<Scalar>(d, rng);
    if (separated(x)) {
      accept(x);
      rejections = 0;
    } else {
      ++rejections;
    }
  }

  const double probes = 10.0 * std::pow(2.0 / static_cast<double>(epsilon) + 1.0, static_cast<double>(d));
  for (std::int64_t n = 0; n < static_cast<std::int64_t>(probes); ++n) {
    const Vector<Scalar> x = sample_unit_ball<Scalar>(d, rng);
    if (separated(x)) accept(x);
  }

  Matrix<Scalar> centers = Eigen::Map<const Matrix<Scalar>>(flat.data(), d, count);
  return NetCodebook<Scalar>(std::move(centers), epsilon, seed,
                             NetCodebook<Scalar>::Kind::kGreedy);
}

// Deterministic alternative: cubic grid of spacing 2ε/√d (half-diagonal ε)
// over [-1,1]^d, keeping cells that meet the ball and projecting their
// centers onto it. Covers the ball exactly but is not ε-separated, so it
// needs roughly d·log₂(√d/ε) bits instead of the packing count.
template <typename Scalar = double>
NetCodebook<Scalar> build_grid_net(Eigen::Index d, Scalar epsilon) {
  if (d < 1) throw InvalidArgument("build_grid_net: d must be >= 1");
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("build_grid_net: epsilon must be in (0,1)");
  const double h = 2.0 * static_cast<double>(epsilon) / std::sqrt(static_cast<double>(d));
  const auto per_axis = static_cast<std::int64_t>(std::ceil(2.0 / h));
  const double half_diag = h * std::sqrt(static_cast<double>(d)) / 2.0;
  std::vector<Scalar> flat;
  Eigen::Index count = 0;
  std::vector<std::int64_t> idx(d, 0);
  Vector<Scalar> c(d);
  while (true) {
    for (Eigen::Index i = 0; i < d; ++i) c[i] = static_cast<Scalar>(-1.0 + h * (idx[i] + 0.5));
    const double n = static_cast<double>(c.norm());
    if (n - half_diag <= 1.0) {
      if (n > 1.0) c /= static_cast<Scalar>(n);
      flat.insert(flat.end(), c.data(), c.data() + d);
      ++count;
    }
    Eigen::Index axis = 0;
    while (axis < d && ++idx[axis] == per_axis) idx[axis++] = 0;
    if (axis == d) break;
  }
  Matrix<Scalar> centers = Eigen::Map<const Matrix<Scalar>>(flat.data(), d, count);
  return NetCodebook<Scalar>(std::move(centers), epsilon, 0, NetCodebook<Scalar>::Kind::kGrid);
}

// Overflow when ‖e/p‖ > 1; otherwise the nearest center to e/p. Working on
// e/p makes encode(cb, p, e) == encode(cb, 1, e/p) exactly.
template <typename Scalar>
Symbol vector_encode(const NetCodebook<Scalar>& cb, Scalar p, const Vector<Scalar>& e,
                     CodecCounters* counters = nullptr) {
  if (!(p > 0)) throw InvalidArgument("vector_encode: radius p must be positive");
  if (e.size() != cb.dim()) throw InvalidArgument("vector_encode: dimension mismatch");
  const Vector<Scalar> u = e / p;
  if (counters) ++counters->encodes;
  if (u.squaredNorm() > Scalar(1)) {
    if (counters) ++counters->overflows;
    return cb.overflow_symbol();
  }
  const auto [j, d2] = cb.nearest(u);
  if (counters && d2 > cb.epsilon() * cb.epsilon()) ++counters->coverage_violations;
  return {static_cast<std::uint64_t>(j)};
}

// p·c_sym, or nullopt for the overflow letter.
template <typename Scalar>
std::optional<Vector<Scalar>> vector_decode(const NetCodebook<Scalar>& cb, Scalar p, Symbol sym) {
  if (cb.is_overflow(sym)) return std::nullopt;
  if (sym.value > static_cast<std::uint64_t>(cb.size())) {
    throw ProtocolError("symbol " + std::to_string(sym.value) + " outside codebook of size " +
                        std::to_string(cb.size()));
  }
  return Vector<Scalar>(p * cb.centers().col(static_cast<Eigen::Index>(sym.value)));
}

// Smallest B whose alphabet holds `letters` symbols.
int required_bits(std::uint64_t letters);

// Passes iff size + 1 (overflow letter) ≤ 2^B; otherwise throws ConfigError
// naming the required B.
void capacity_check(std::int64_t codebook_size, int B);

template <typename Scalar>
void capacity_check(const NetCodebook<Scalar>& cb, int B) {
  capacity_check(static_cast<std::int64_t>(cb.size()), B);
}

// Flat binary form, little-endian:
//   magic "BBNET001" | u32 d | u32 kind | f64 ε | u64 seed | u64 count |
//   count·d f64 centers, row-major (one center per row).
void save_codebook(const NetCodebook<double>& cb, const std::string& path);
NetCodebook<double> load_codebook(const std::string& path);

}  // namespace bitbandit

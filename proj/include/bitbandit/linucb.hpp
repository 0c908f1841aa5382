#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bitbandit/codebook.hpp"
#include "bitbandit/common.hpp"
#include "bitbandit/ellipsoid.hpp"
#include "bitbandit/env.hpp"
#include "bitbandit/least_squares.hpp"
#include "bitbandit/trace.hpp"

namespace bitbandit {

// √β_T = √λ·M + sqrt(2 log(1/δ) + d log((dλ + T L²)/(dλ))).
double beta_sqrt(double lambda, double M, double delta, double d, double T, double L);

// √β_T + sqrt(λ + (t-1)L²)·q_t: the quantization-inflated radius.
double conf_radius(double beta_sqrt, double lambda, double t, double L, double q_t);

// ⌈c·ratio·L²·d·√T·log(dLT)⌉, ratio = k2/k1 (1 for the linear model).
// Throws ConfigError when fewer than two rounds would remain after it.
std::int64_t exploration_length(int d, std::int64_t T, double L, double c_explore, double ratio);

// c_explore defaults to 10; the knob exists because that constant leaves no
// room for a second phase at small horizons. It is not a theoretical quantity.
std::int64_t pure_exploration_length(int d, std::int64_t T, double L, double c_explore = 10.0);

// How the agent encodes innovations.
enum class CodecKind {
  kGreedyNet,  // seeded greedy ε-packing of the unit ball
  kGridNet,    // deterministic cubic grid (larger alphabet)
  kIdentity,   // lossless surrogate: exact innovation, q ≡ 0
};

// Parameters of one linear or generalized-linear run.
struct LinearConfig {
  int d = 2;
  std::int64_t T = 10000;
  int B = 12;
  int K = 32;
  double L = 1.0;
  double M = 1.0;
  double lambda = 1.0;
  double epsilon = 0.5;
  double delta = 0.0;  // ≤ 0 means 1/T
  double c_explore = 10.0;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
  std::int64_t run_id = 0;

  CodecKind codec = CodecKind::kGreedyNet;
  std::uint64_t codebook_seed = 0;
  std::int64_t stop_rejections = kDefaultStopRejections;
  // Prebuilt codebook shared across runs; built from the fields above if null.
  std::shared_ptr<const NetCodebook<double>> codebook;

  std::string link = "identity";  // GLM runs only

  // θ* defaults to theta_norm (or M when ≤ 0) times a uniform sphere draw.
  std::optional<VectorXd> theta_star;
  double theta_norm = 0.0;
  // Fixed candidate set (columns); otherwise K unit vectors are sampled.
  std::optional<MatrixXd> candidates;
  // Optional per-round action-set regeneration, called before each
  // exploitation round.
  std::function<void(std::int64_t t, MatrixXd& candidates)> regenerate_actions;

  double resolved_delta() const { return delta > 0 ? delta : 1.0 / static_cast<double>(T); }
};

// Quantities recorded during a run for the structural checks.
struct LinearInternals {
  std::int64_t T = 0;
  std::int64_t T_bar = 0;
  std::int64_t T_tilde = 0;
  double beta_sqrt = 0;
  double f = 0;             // f(T) (or f̄(T) for GLM)
  double q0 = 0;            // q at the end of exploration
  double k1 = 1, k2 = 1;
  int B = 0;
  std::int64_t codebook_size = 0;

  double eigen_floor_threshold = 0;
  double lambda_min_at_T_bar = 0;
  double lambda_min_observed = 0;  // minimum over all checkpoints t ≥ T̄

  double max_estimate_gap = 0;  // max over t ≥ T̄ of ‖θ̂_{t+1} − θ̂_t‖

  std::int64_t overflow_events = 0;
  std::int64_t coverage_violations = 0;  // codec-level, innovation farther than εp
  std::int64_t decision_rounds = 0;      // phase-2 rounds
  std::int64_t coverage_misses = 0;      // phase-2 rounds with θ* outside the set

  double inflation_bound = 0;          // 4·sqrt(β_T / log(dLT))
  double max_inflation_settled = 0;    // max over t ≥ T̄+T̃ of sqrt(λ+(t-1)L²)·q_t
  std::int64_t mirror_mismatches = 0;  // agent copy of θ̂^(s) ≠ server θ̂^(s)
  std::int64_t transmissions = 0;
  std::int64_t bits_sent = 0;
  double final_cum_regret = 0;
};

struct LinearRun {
  std::vector<TraceRow> trace;  // empty when a sink consumed the rows
  LinearInternals internals;
};

// Information-constrained LinUCB: exploration on the sphere, then
// innovation coding over the B-bit channel with inflated optimism.
LinearRun run_ic_linucb(const LinearConfig& cfg, const TraceSink& sink = {});

// Uncompressed baseline: same exploration phase, then optimism around the
// agent's own estimate with radius √β_T. No channel.
LinearRun run_linucb(const LinearConfig& cfg, const TraceSink& sink = {});

struct LinearReport {
  bool eigen_floor = false;      // λ_min(V_t) ≥ threshold for t ≥ T̄
  bool estimate_gap = false;     // successive estimates within f(T)
  bool no_overflow = false;
  bool coverage = false;         // θ* in the server set for every phase-2 round
  bool inflation_decay = false;  // inflation ≤ 4·sqrt(β_T/log(dLT)) after T̄+T̃
  bool mirrors_synced = false;
  bool bits_exact = false;       // bits = B·(T − T̄)
  double coverage_rate = 0;

  bool all() const {
    return eigen_floor && estimate_gap && no_overflow && coverage && inflation_decay &&
           mirrors_synced && bits_exact;
  }
};

LinearReport diagnostics_linucb(const LinearInternals& in);

// Shared setup: θ*, candidate set, and codebook per the config's seeds.
VectorXd make_theta_star(const LinearConfig& cfg);
MatrixXd make_candidates(const LinearConfig& cfg);
std::shared_ptr<const NetCodebook<double>> make_codebook(const LinearConfig& cfg);

}  // namespace bitbandit

#pragma once

#include <cstdint>

namespace bitbandit {

// Encoding-radius recursion for the vector codec, computed identically by
// agent and server:
//   q_t = ε (q_{t-1} + f),   p_t = q_t + f.
// q_t bounds the server's decode error entering round t; p_t is the radius
// of the ball the agent encodes into at round t.
struct QuantSchedule {
  double q = 0;
  double p = 0;
  double f_const = 0;
  double epsilon = 0.5;

  static QuantSchedule start(double q0, double f_const, double epsilon) {
    return {q0, q0 + f_const, f_const, epsilon};
  }
};

QuantSchedule schedule_step(const QuantSchedule& s);

// q after τ steps from q0, unrolled: ε^τ q0 + f·Σ_{k=1..τ} ε^k.
double schedule_closed_form_q(double q0, double f_const, double epsilon, std::int64_t tau);

// (3/(5L))·sqrt(β_T / (k1k2·T·log(dLT))). k1k2 = 1 gives the linear model's
// f(T); the GLM variant passes k1·k2.
double f_of_T(double L, double T, double d, double beta_T, double k1k2 = 1.0);

// Rounds after the exploration phase until the inflation term has settled:
// ⌈log(q0/f) / log(1/ε)⌉ ∨ 2, which is ⌈log₂(10M/f)⌉ ∨ 2 for q0 = 10M, ε = 1/2.
std::int64_t settle_rounds(double q0, double f_const, double epsilon);

// Per-arm scalar recursion for the one-bit multi-armed protocol:
//   f_k = 2·sqrt(log T / k),  q_k = γ p_k,  p_{k+1} = γ p_k + 2 f_k,  p_1 = m + f_1.
struct ScalarSchedule {
  double gamma = 0.5;
  double m = 1;
  double logT = 0;
  std::int64_t k = 1;
  double f = 0;
  double p = 0;
  double q = 0;

  // γ = 2^-B.
  static ScalarSchedule start(int B, double m, double T);
  static ScalarSchedule start_with_gamma(double gamma, double m, double T);
};

ScalarSchedule scalar_schedule_step(const ScalarSchedule& s);

// γ^k (m + f_1) + (12/B)·sqrt(log T / k).
double scalar_envelope(int B, double m, double T, std::int64_t k);

}  // namespace bitbandit

#include "bitbandit/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "bitbandit/common.hpp"

namespace bitbandit {

QuantSchedule schedule_step(const QuantSchedule& s) {
  QuantSchedule next = s;
  next.q = s.epsilon * (s.q + s.f_const);
  next.p = next.q + s.f_const;
  return next;
}

double schedule_closed_form_q(double q0, double f_const, double epsilon, std::int64_t tau) {
  if (tau < 0) throw InvalidArgument("schedule_closed_form_q: tau must be >= 0");
  const double et = std::pow(epsilon, static_cast<double>(tau));
  // Σ_{k=1..τ} ε^k = ε(1 - ε^τ)/(1 - ε)
  return et * q0 + f_const * epsilon * (1.0 - et) / (1.0 - epsilon);
}

double f_of_T(double L, double T, double d, double beta_T, double k1k2) {
  const double dlt = d * L * T;
  if (!(dlt > 1.0)) throw InvalidArgument("f_of_T: requires d*L*T > 1");
  if (beta_T < 0) throw InvalidArgument("f_of_T: beta_T must be >= 0");
  return 3.0 / (5.0 * L) * std::sqrt(beta_T / (k1k2 * T * std::log(dlt)));
}

std::int64_t settle_rounds(double q0, double f_const, double epsilon) {
  if (!(f_const > 0)) throw InvalidArgument("settle_rounds: f must be positive");
  const double r = std::ceil(std::log(q0 / f_const) / std::log(1.0 / epsilon));
  return std::max<std::int64_t>(static_cast<std::int64_t>(r), 2);
}

ScalarSchedule ScalarSchedule::start(int B, double m, double T) {
  if (B < 1) throw InvalidArgument("scalar schedule: B must be >= 1");
  return start_with_gamma(std::ldexp(1.0, -B), m, T);
}

ScalarSchedule ScalarSchedule::start_with_gamma(double gamma, double m, double T) {
  if (!(T > 1)) throw InvalidArgument("scalar schedule: T must exceed 1");
  ScalarSchedule s;
  s.gamma = gamma;
  s.m = m;
  s.logT = std::log(T);
  s.k = 1;
  s.f = 2.0 * std::sqrt(s.logT);
  s.p = m + s.f;
  s.q = gamma * s.p;
  return s;
}

ScalarSchedule scalar_schedule_step(const ScalarSchedule& s) {
  if (s.k < 1) throw InvalidArgument("scalar_schedule_step: k must be >= 1");
  ScalarSchedule next = s;
  next.p = s.gamma * s.p + 2.0 * s.f;
  next.k = s.k + 1;
  next.f = 2.0 * std::sqrt(s.logT / static_cast<double>(next.k));
  next.q = s.gamma * next.p;
  return next;
}

double scalar_envelope(int B, double m, double T, std::int64_t k) {
  const double logT = std::log(T);
  const double f1 = 2.0 * std::sqrt(logT);
  return std::pow(std::ldexp(1.0, -B), static_cast<double>(k)) * (m + f1) +
         12.0 / B * std::sqrt(logT / static_cast<double>(k));
}

}  // namespace bitbandit

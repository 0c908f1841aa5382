#include "bitbandit/linucb.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bitbandit/schedule.hpp"
#include "protocol.hpp"

namespace bitbandit {
namespace {

class LsEstimator {
 public:
  LsEstimator(int d, double lambda) : ls_(d, lambda) {}

  void observe(const VectorXd& a, double y) { ls_.update(a, y); }
  const VectorXd& estimate(std::int64_t) const { return ls_.theta_hat(); }
  const GramState<double>& gram() const { return ls_.gram(); }

 private:
  LsState<double> ls_;
};

void validate(const LinearConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("d must be >= 1");
  if (cfg.T < static_cast<std::int64_t>(cfg.d) * cfg.d) throw ConfigError("T must be >= d^2");
  if (cfg.B < 1) throw ConfigError("B must be >= 1");
  if (!(cfg.epsilon > 0 && cfg.epsilon < 1)) throw ConfigError("epsilon must be in (0,1)");
  const double delta = cfg.resolved_delta();
  if (!(delta > 0 && delta <= 1)) throw ConfigError("delta must be in (0,1]");
  if (!(cfg.lambda > 0)) throw ConfigError("lambda must be positive");
  if (!(cfg.L > 0) || !(cfg.M > 0)) throw ConfigError("L and M must be positive");
  if (cfg.c_explore < 0) throw ConfigError("c_explore must be >= 0");
}

}  // namespace

double beta_sqrt(double lambda, double M, double delta, double d, double T, double L) {
  if (!(lambda > 0)) throw InvalidArgument("beta_sqrt: lambda must be positive");
  if (!(delta > 0 && delta <= 1)) throw InvalidArgument("beta_sqrt: delta must be in (0,1]");
  const double inner =
      2.0 * std::log(1.0 / delta) + d * std::log((d * lambda + T * L * L) / (d * lambda));
  return std::sqrt(lambda) * M + std::sqrt(inner);
}

double conf_radius(double beta_sqrt, double lambda, double t, double L, double q_t) {
  if (t < 1) throw InvalidArgument("conf_radius: t must be >= 1");
  return beta_sqrt + std::sqrt(lambda + (t - 1.0) * L * L) * q_t;
}

std::int64_t exploration_length(int d, std::int64_t T, double L, double c_explore, double ratio) {
  const double Td = static_cast<double>(T);
  const double dlt = d * L * Td;
  if (!(dlt > 1)) throw ConfigError("exploration length needs d*L*T > 1");
  const double v = std::ceil(c_explore * ratio * L * L * d * std::sqrt(Td) * std::log(dlt));
  if (v + 2 > Td) {
    throw ConfigError("horizon too short: exploration needs " +
                      std::to_string(static_cast<long long>(v)) + " rounds, T = " +
                      std::to_string(T) + " (lower c_explore or raise T)");
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t pure_exploration_length(int d, std::int64_t T, double L, double c_explore) {
  return exploration_length(d, T, L, c_explore, 1.0);
}

VectorXd make_theta_star(const LinearConfig& cfg) {
  if (cfg.theta_star) {
    if (cfg.theta_star->size() != cfg.d) throw ConfigError("theta_star has wrong dimension");
    return *cfg.theta_star;
  }
  Rng rng = derive_stream(cfg.seed, Stream::kThetaStar);
  const double norm = cfg.theta_norm > 0 ? cfg.theta_norm : cfg.M;
  if (norm > cfg.M) throw ConfigError("theta_norm exceeds M");
  return norm * sample_sphere(cfg.d, rng);
}

MatrixXd make_candidates(const LinearConfig& cfg) {
  if (cfg.candidates) {
    if (cfg.candidates->rows() != cfg.d) throw ConfigError("candidates have wrong dimension");
    return *cfg.candidates;
  }
  Rng rng = derive_stream(cfg.seed, Stream::kActionSet);
  return make_action_set(cfg.d, cfg.K, cfg.L, rng).candidates();
}

std::shared_ptr<const NetCodebook<double>> make_codebook(const LinearConfig& cfg) {
  if (cfg.codebook) return cfg.codebook;
  switch (cfg.codec) {
    case CodecKind::kGreedyNet:
      return std::make_shared<const NetCodebook<double>>(
          build_unit_net<double>(cfg.d, cfg.epsilon, cfg.codebook_seed, cfg.stop_rejections));
    case CodecKind::kGridNet:
      return std::make_shared<const NetCodebook<double>>(build_grid_net<double>(cfg.d, cfg.epsilon));
    case CodecKind::kIdentity:
      return nullptr;
  }
  return nullptr;
}

LinearRun run_ic_linucb(const LinearConfig& cfg, const TraceSink& sink) {
  validate(cfg);
  const double Td = static_cast<double>(cfg.T);
  const double delta = cfg.resolved_delta();

  detail::ProtocolConstants pc;
  pc.T_bar = pure_exploration_length(cfg.d, cfg.T, cfg.L, cfg.c_explore);
  pc.beta_sqrt = beta_sqrt(cfg.lambda, cfg.M, delta, cfg.d, Td, cfg.L);
  pc.f = f_of_T(cfg.L, Td, cfg.d, pc.beta_sqrt * pc.beta_sqrt);
  pc.q0_nominal = 10.0 * cfg.M;
  const bool lossless = cfg.codec == CodecKind::kIdentity;
  pc.f_sched = lossless ? 0.0 : pc.f;
  pc.q0 = lossless ? 0.0 : pc.q0_nominal;
  const double bs = pc.beta_sqrt, lambda = cfg.lambda, L = cfg.L;
  pc.radius = [bs, lambda, L](double t, double q) { return conf_radius(bs, lambda, t, L, q); };

  const auto cb = lossless ? nullptr : make_codebook(cfg);
  if (cb) {
    if (cb->dim() != cfg.d) throw ConfigError("codebook dimension does not match d");
    capacity_check(*cb, cfg.B);
  }

  LinearEnv env(make_theta_star(cfg), cfg.M, cfg.L, derive_stream(cfg.seed, Stream::kNoise),
                cfg.noise_sd);
  LsEstimator est(cfg.d, cfg.lambda);
  return detail::run_protocol(cfg, pc, env, est, make_candidates(cfg), cb.get(), sink);
}

LinearRun run_linucb(const LinearConfig& cfg, const TraceSink& sink) {
  validate(cfg);
  const int d = cfg.d;
  const std::int64_t T = cfg.T;
  const double Td = static_cast<double>(T);

  LinearRun run;
  LinearInternals& in = run.internals;
  in.T = T;
  in.T_bar = pure_exploration_length(d, T, cfg.L, cfg.c_explore);
  in.beta_sqrt = beta_sqrt(cfg.lambda, cfg.M, cfg.resolved_delta(), d, Td, cfg.L);
  in.f = f_of_T(cfg.L, Td, d, in.beta_sqrt * in.beta_sqrt);
  const double log_dlt = std::log(d * cfg.L * Td);
  in.eigen_floor_threshold = cfg.c_explore / 2.0 * cfg.L * cfg.L * std::sqrt(Td) * log_dlt;
  in.inflation_bound = 4.0 * std::sqrt(in.beta_sqrt * in.beta_sqrt / log_dlt);
  in.lambda_min_observed = std::numeric_limits<double>::infinity();
  if (!sink) run.trace.reserve(static_cast<std::size_t>(T));

  LinearEnv env(make_theta_star(cfg), cfg.M, cfg.L, derive_stream(cfg.seed, Stream::kNoise),
                cfg.noise_sd);
  ActionSet A(make_candidates(cfg), cfg.L);
  double best = best_mean(env, A);
  Rng explore = derive_stream(cfg.seed, Stream::kExploration);
  LsState<double> ls(d, cfg.lambda);
  ConfidenceEllipsoid<double> ell{VectorXd::Zero(d), ls.V(), ls.gram().V_inv(), in.beta_sqrt};
  VectorXd prev;
  double cum = 0;

  for (std::int64_t t = 1; t <= T; ++t) {
    TraceRow row;
    row.run_id = cfg.run_id;
    row.seed = cfg.seed;
    row.t = t;
    VectorXd a;
    if (t <= in.T_bar + 1) {
      a = sample_sphere(d, explore);
    } else {
      row.phase = 2;
      if (cfg.regenerate_actions) {
        MatrixXd c = A.candidates();
        cfg.regenerate_actions(t, c);
        A = ActionSet(std::move(c), cfg.L);
        best = best_mean(env, A);
      }
      ell.center = ls.theta_hat();
      ell.shape = ls.V();
      ell.shape_inv = ls.gram().V_inv();
      row.coverage_flag = ell.contains(env.theta_star()) ? 1 : 0;
      ++in.decision_rounds;
      if (!row.coverage_flag) ++in.coverage_misses;
      const Eigen::Index k = ucb_index(ell, A.candidates());
      row.action_index = k;
      a = A.candidates().col(k);
    }
    const double y = env.observe(a);
    row.reward = y;
    row.inst_regret = std::max(0.0, best - env.mean_reward(a));
    cum += row.inst_regret;
    row.cum_regret = cum;
    ls.update(a, y);

    if (t >= in.T_bar) {
      if (t == in.T_bar || t == T || (t - in.T_bar) % detail::kEigenCheckInterval == 0) {
        const double lm = ls.gram().lambda_min();
        if (t == in.T_bar) in.lambda_min_at_T_bar = lm;
        in.lambda_min_observed = std::min(in.lambda_min_observed, lm);
      }
      if (t > in.T_bar && prev.size() == d) {
        in.max_estimate_gap = std::max(in.max_estimate_gap, (ls.theta_hat() - prev).norm());
      }
      prev = ls.theta_hat();
    }
    if (sink) {
      sink(row);
    } else {
      run.trace.push_back(row);
    }
  }
  in.final_cum_regret = cum;
  if (!std::isfinite(in.lambda_min_observed)) in.lambda_min_observed = 0;
  return run;
}

LinearReport diagnostics_linucb(const LinearInternals& in) {
  LinearReport r;
  r.eigen_floor = in.lambda_min_at_T_bar >= in.eigen_floor_threshold &&
                  in.lambda_min_observed >= in.eigen_floor_threshold;
  r.estimate_gap = in.max_estimate_gap <= in.f;
  r.no_overflow = in.overflow_events == 0;
  r.coverage = in.coverage_misses == 0;
  r.coverage_rate = in.decision_rounds > 0
                        ? 1.0 - static_cast<double>(in.coverage_misses) /
                                    static_cast<double>(in.decision_rounds)
                        : 1.0;
  r.inflation_decay = in.max_inflation_settled <= in.inflation_bound;
  r.mirrors_synced = in.mirror_mismatches == 0;
  r.bits_exact = in.transmissions == in.T - in.T_bar &&
                 in.bits_sent == static_cast<std::int64_t>(in.B) * (in.T - in.T_bar);
  return r;
}

}  // namespace bitbandit

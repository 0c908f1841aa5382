#include "bitbandit/glm.hpp"

#include <cmath>
#include <string>

#include "bitbandit/schedule.hpp"
#include "protocol.hpp"

namespace bitbandit {
namespace {

// Refits lazily, at most once per round; rounds before T̄ never ask.
class GlmEstimator {
 public:
  GlmEstimator(int d, double lambda, LinkFunction link) : st_(d, lambda), link_(std::move(link)) {}

  void observe(const VectorXd& a, double y) {
    st_.observe(a, y);
    fitted_at_ = -1;
  }

  const VectorXd& estimate(std::int64_t t) {
    if (fitted_at_ != t) {
      try {
        glm_fit(st_, link_);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("round " + std::to_string(t) + ": " + e.what(), e.residual());
      }
      fitted_at_ = t;
    }
    return st_.theta_hat();
  }

  const GramState<double>& gram() const { return st_.gram(); }

 private:
  GlmAgentState<double> st_;
  LinkFunction link_;
  std::int64_t fitted_at_ = -1;
};

}  // namespace

double glm_conf_radius(double beta_sqrt, double k2, double lambda, double t, double L, double q_t) {
  if (t < 1) throw InvalidArgument("glm_conf_radius: t must be >= 1");
  return beta_sqrt + k2 * std::sqrt(lambda + (t - 1.0) * L * L) * q_t;
}

std::int64_t glm_exploration_length(int d, std::int64_t T, double L, double k1, double k2,
                                    double c_explore) {
  if (!(k1 > 0)) throw ConfigError("glm_exploration_length: k1 must be positive");
  return exploration_length(d, T, L, c_explore, k2 / k1);
}

LinearRun run_ic_glmucb(const LinearConfig& cfg, const TraceSink& sink) {
  if (cfg.d < 1) throw ConfigError("d must be >= 1");
  if (cfg.T < static_cast<std::int64_t>(cfg.d) * cfg.d) throw ConfigError("T must be >= d^2");
  if (cfg.B < 1) throw ConfigError("B must be >= 1");
  if (!(cfg.epsilon > 0 && cfg.epsilon < 1)) throw ConfigError("epsilon must be in (0,1)");
  if (!(cfg.lambda > 0)) throw ConfigError("lambda must be positive");

  const LinkFunction link = LinkFunction::parse(cfg.link);
  const LinkConstants kc = link_constants(link, cfg.L, cfg.M);
  const double Td = static_cast<double>(cfg.T);
  const double k1k2 = kc.k1 * kc.k2;

  detail::ProtocolConstants pc;
  pc.k1 = kc.k1;
  pc.k2 = kc.k2;
  pc.T_bar = glm_exploration_length(cfg.d, cfg.T, cfg.L, kc.k1, kc.k2, cfg.c_explore);
  pc.beta_sqrt = beta_sqrt(cfg.lambda, cfg.M, cfg.resolved_delta(), cfg.d, Td, cfg.L);
  pc.f = f_of_T(cfg.L, Td, cfg.d, pc.beta_sqrt * pc.beta_sqrt, k1k2);
  pc.q0_nominal = (4.0 + 6.0 / std::sqrt(k1k2)) * cfg.M;
  const bool lossless = cfg.codec == CodecKind::kIdentity;
  pc.f_sched = lossless ? 0.0 : pc.f;
  pc.q0 = lossless ? 0.0 : pc.q0_nominal;
  const double bs = pc.beta_sqrt, k2 = kc.k2, lambda = cfg.lambda, L = cfg.L;
  pc.radius = [bs, k2, lambda, L](double t, double q) {
    return glm_conf_radius(bs, k2, lambda, t, L, q);
  };

  const auto cb = lossless ? nullptr : make_codebook(cfg);
  if (cb) {
    if (cb->dim() != cfg.d) throw ConfigError("codebook dimension does not match d");
    capacity_check(*cb, cfg.B);
  }

  GlmEnv env(make_theta_star(cfg), link, cfg.M, cfg.L, derive_stream(cfg.seed, Stream::kNoise),
             cfg.noise_sd);
  GlmEstimator est(cfg.d, cfg.lambda, link);
  return detail::run_protocol(cfg, pc, env, est, make_candidates(cfg), cb.get(), sink);
}

}  // namespace bitbandit

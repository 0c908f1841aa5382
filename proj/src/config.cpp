#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bitbandit/harness.hpp"
#include "bitbandit/link.hpp"

namespace bitbandit {
namespace {

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("seeds: bad value '" + std::string(s) + "'");
  }
  return v;
}

template <typename T>
void take(const nlohmann::json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

std::string to_string(Algo a) {
  switch (a) {
    case Algo::kIcLinUcb: return "ic-linucb";
    case Algo::kLinUcb: return "linucb";
    case Algo::kIcGlmUcb: return "ic-glmucb";
    case Algo::kIcUcb: return "ic-ucb";
    case Algo::kUcb: return "ucb";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  for (Algo a : {Algo::kIcLinUcb, Algo::kLinUcb, Algo::kIcGlmUcb, Algo::kIcUcb, Algo::kUcb}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("algo: unknown algorithm '" + name +
                    "' (expected ic-linucb, linucb, ic-glmucb, ic-ucb or ucb)");
}

bool is_linear_family(Algo a) {
  return a == Algo::kIcLinUcb || a == Algo::kLinUcb || a == Algo::kIcGlmUcb;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_u64(item));
      continue;
    }
    const std::uint64_t lo = parse_u64(item.substr(0, dots));
    const std::uint64_t hi = parse_u64(item.substr(dots + 2));
    if (hi < lo) throw ConfigError("seeds: empty range '" + std::string(item) + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError("seeds: no seeds given");
  return out;
}

void validate(const RunConfig& c) {
  const bool mab = !is_linear_family(c.algo);
  if (c.T < 1) throw ConfigError("T: must be positive");
  if (c.B < 1) throw ConfigError("B: must be >= 1");
  if (c.seeds.empty()) throw ConfigError("seeds: no seeds given");
  if (mab) {
    if (c.means.size() < 2) throw ConfigError("means: MAB runs need at least 2 arm means");
    if (c.T < static_cast<std::int64_t>(c.means.size())) {
      throw ConfigError("T: must be >= number of arms");
    }
    if (c.B > 52) throw ConfigError("B: the scalar codec supports at most 52 bits");
    return;
  }
  if (c.d < 1) throw ConfigError("d: must be >= 1");
  if (c.T < static_cast<std::int64_t>(c.d) * c.d) throw ConfigError("T: must be >= d^2");
  if (c.K < 2) throw ConfigError("K: need at least 2 candidates");
  if (!(c.epsilon > 0 && c.epsilon < 1)) {
    throw ConfigError("epsilon: must be in (0,1), got " + format_double(c.epsilon));
  }
  const double delta = c.resolved_delta();
  if (!(delta > 0 && delta <= 1)) {
    throw ConfigError("delta: must be in (0,1], got " + format_double(c.delta));
  }
  if (!(c.lambda > 0)) throw ConfigError("lambda: must be positive");
  if (!(c.L > 0)) throw ConfigError("L: must be positive");
  if (!(c.M > 0)) throw ConfigError("M: must be positive");
  if (c.c_explore < 0) throw ConfigError("c_explore: must be >= 0");
  if (c.codec != "greedy" && c.codec != "grid" && c.codec != "identity") {
    throw ConfigError("codec: expected greedy, grid or identity, got '" + c.codec + "'");
  }
  if (c.algo == Algo::kIcGlmUcb) {
    try {
      (void)LinkFunction::parse(c.link);
    } catch (const Error& e) {
      throw ConfigError(std::string("link: ") + e.what());
    }
  }
}

RunConfig apply_json(const std::string& json_text, RunConfig c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a flat JSON object");
  if (j.contains("algo")) c.algo = parse_algo(j.at("algo").get<std::string>());
  take(j, "d", c.d);
  take(j, "T", c.T);
  take(j, "B", c.B);
  take(j, "K", c.K);
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_string()) {
      c.seeds = parse_seeds(s.get<std::string>());
    } else if (s.is_number_unsigned()) {
      c.seeds = {s.get<std::uint64_t>()};
    } else {
      take(j, "seeds", c.seeds);
    }
  }
  if (j.contains("seed")) c.seeds = {j.at("seed").get<std::uint64_t>()};
  take(j, "L", c.L);
  take(j, "M", c.M);
  take(j, "lambda", c.lambda);
  take(j, "epsilon", c.epsilon);
  take(j, "delta", c.delta);
  take(j, "c_explore", c.c_explore);
  take(j, "noise_sd", c.noise_sd);
  take(j, "link", c.link);
  take(j, "means", c.means);
  take(j, "m", c.m);
  take(j, "codec", c.codec);
  take(j, "codebook_seed", c.codebook_seed);
  take(j, "codebook", c.codebook_path);
  take(j, "out", c.out);
  take(j, "traces", c.write_traces);
  return c;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_json(ss.str(), std::move(base));
}

LinearConfig to_linear_config(const RunConfig& c, std::uint64_t seed, std::int64_t run_id) {
  LinearConfig lc;
  lc.d = c.d;
  lc.T = c.T;
  lc.B = c.B;
  lc.K = c.K;
  lc.L = c.L;
  lc.M = c.M;
  lc.lambda = c.lambda;
  lc.epsilon = c.epsilon;
  lc.delta = c.delta;
  lc.c_explore = c.c_explore;
  lc.noise_sd = c.noise_sd;
  lc.seed = seed;
  lc.run_id = run_id;
  lc.codec = c.codec == "grid"       ? CodecKind::kGridNet
             : c.codec == "identity" ? CodecKind::kIdentity
                                     : CodecKind::kGreedyNet;
  lc.codebook_seed = c.codebook_seed;
  lc.link = c.link;
  return lc;
}

MabConfig to_mab_config(const RunConfig& c, std::uint64_t seed, std::int64_t run_id) {
  MabConfig mc;
  mc.means = c.means;
  mc.m = c.m;
  mc.B = c.B;
  mc.T = c.T;
  mc.seed = seed;
  mc.run_id = run_id;
  mc.noise_sd = c.noise_sd;
  mc.lossless = c.codec == "identity";
  return mc;
}

}  // namespace bitbandit

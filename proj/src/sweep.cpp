#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bitbandit/harness.hpp"

namespace bitbandit {
namespace {

namespace fs = std::filesystem;

using Metrics = std::vector<std::pair<std::string, double>>;

void add(Metrics& m, const std::string& k, double v) { m.emplace_back(k, v); }
void add_check(Metrics& m, const std::string& k, bool ok) { m.emplace_back("check_" + k, ok ? 1.0 : 0.0); }

Metrics linear_metrics(Algo algo, const LinearInternals& in) {
  const LinearReport r = diagnostics_linucb(in);
  Metrics m;
  add(m, "T_bar", static_cast<double>(in.T_bar));
  add(m, "beta_sqrt", in.beta_sqrt);
  add(m, "f", in.f);
  add(m, "eigen_floor_threshold", in.eigen_floor_threshold);
  add(m, "lambda_min_at_T_bar", in.lambda_min_at_T_bar);
  add(m, "lambda_min_observed", in.lambda_min_observed);
  add(m, "max_estimate_gap", in.max_estimate_gap);
  add(m, "decision_rounds", static_cast<double>(in.decision_rounds));
  add(m, "coverage_misses", static_cast<double>(in.coverage_misses));
  add(m, "coverage_rate", r.coverage_rate);
  if (algo != Algo::kLinUcb) {
    add(m, "T_tilde", static_cast<double>(in.T_tilde));
    add(m, "q0", in.q0);
    add(m, "k1", in.k1);
    add(m, "k2", in.k2);
    add(m, "B", in.B);
    add(m, "codebook_size", static_cast<double>(in.codebook_size));
    add(m, "overflow_events", static_cast<double>(in.overflow_events));
    add(m, "coverage_violations", static_cast<double>(in.coverage_violations));
    add(m, "inflation_bound", in.inflation_bound);
    add(m, "max_inflation_settled", in.max_inflation_settled);
    add(m, "mirror_mismatches", static_cast<double>(in.mirror_mismatches));
    add(m, "transmissions", static_cast<double>(in.transmissions));
  }
  add(m, "bits_sent", static_cast<double>(in.bits_sent));
  add(m, "final_cum_regret", in.final_cum_regret);
  add_check(m, "eigen_floor", r.eigen_floor);
  add_check(m, "estimate_gap", r.estimate_gap);
  add_check(m, "coverage", r.coverage);
  if (algo != Algo::kLinUcb) {
    add_check(m, "no_overflow", r.no_overflow);
    add_check(m, "inflation_decay", r.inflation_decay);
    add_check(m, "mirrors_synced", r.mirrors_synced);
    add_check(m, "bits_exact", r.bits_exact);
  }
  return m;
}

Metrics mab_metrics(Algo algo, const MabInternals& in) {
  Metrics m;
  add(m, "m", in.m);
  for (std::size_t i = 0; i < in.pulls.size(); ++i) {
    add(m, "pulls_" + std::to_string(i), static_cast<double>(in.pulls[i]));
  }
  add(m, "suboptimal_pulls", static_cast<double>(in.suboptimal_pulls));
  add(m, "bits_sent", static_cast<double>(in.bits_sent));
  add(m, "final_cum_regret", in.final_cum_regret);
  if (algo == Algo::kIcUcb) {
    add(m, "transmissions", static_cast<double>(in.transmissions));
    add(m, "silent_rounds", static_cast<double>(in.silent_rounds));
    add(m, "mirror_mismatches", static_cast<double>(in.mirror_mismatches));
    add(m, "decode_bound_violations", static_cast<double>(in.decode_bound_violations));
    add(m, "envelope_violations", static_cast<double>(in.envelope_violations));
    add_check(m, "mirrors_synced", in.mirror_mismatches == 0);
    add_check(m, "decode_bound", in.decode_bound_violations == 0);
    add_check(m, "envelope", in.envelope_violations == 0);
  }
  return m;
}

void write_sidecar(const std::string& path, const RunConfig& cfg, const RunOutcome& o) {
  nlohmann::ordered_json j;
  j["algo"] = to_string(cfg.algo);
  j["run_id"] = o.run_id;
  j["seed"] = o.seed;
  j["T"] = cfg.T;
  j["B"] = cfg.B;
  if (is_linear_family(cfg.algo)) j["d"] = cfg.d;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : o.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

std::string run_stem(const fs::path& dir, std::int64_t run_id) {
  return (dir / ("run_" + std::to_string(run_id))).string();
}

struct Folder {
  std::vector<double> mean, m2, bits;
  std::int64_t n = 0;

  explicit Folder(std::int64_t T) : mean(T, 0.0), m2(T, 0.0), bits(T, 0.0) {}

  void fold(const std::vector<double>& cum, const std::vector<double>& b) {
    ++n;
    const double nd = static_cast<double>(n);
    for (std::size_t t = 0; t < mean.size(); ++t) {
      const double delta = cum[t] - mean[t];
      mean[t] += delta / nd;
      m2[t] += delta * (cum[t] - mean[t]);
      bits[t] += (b[t] - bits[t]) / nd;
    }
  }
};

}  // namespace

std::optional<double> RunOutcome::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  return std::nullopt;
}

int worker_count() {
  if (const char* env = std::getenv("BITBANDIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SweepResult run_sweep(const RunConfig& cfg, int workers) {
  validate(cfg);
  if (workers <= 0) workers = worker_count();
  const std::size_t n_runs = cfg.seeds.size();
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n_runs));

  const bool write = !cfg.out.empty();
  fs::path dir(cfg.out);
  if (write) fs::create_directories(dir);

  // One codebook serves every run; both ends of each run share it.
  std::shared_ptr<const NetCodebook<double>> codebook;
  if (cfg.algo == Algo::kIcLinUcb || cfg.algo == Algo::kIcGlmUcb) {
    if (!cfg.codebook_path.empty()) {
      codebook = std::make_shared<const NetCodebook<double>>(load_codebook(cfg.codebook_path));
    } else if (cfg.codec != "identity") {
      codebook = make_codebook(to_linear_config(cfg, 0, 0));
    }
  }

  SweepResult result;
  result.runs.resize(n_runs);
  Folder folder(cfg.T);
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> parked;
  std::size_t next_fold = 0;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;

  auto execute = [&](std::size_t idx) {
    const std::uint64_t seed = cfg.seeds[idx];
    const auto run_id = static_cast<std::int64_t>(idx);
    std::vector<double> cum(static_cast<std::size_t>(cfg.T), 0.0);
    std::vector<double> bits(static_cast<std::size_t>(cfg.T), 0.0);
    std::unique_ptr<TraceWriter> writer;
    if (write && cfg.write_traces) writer = std::make_unique<TraceWriter>(run_stem(dir, run_id) + ".csv");
    TraceSink sink = [&](const TraceRow& r) {
      cum[static_cast<std::size_t>(r.t - 1)] = r.cum_regret;
      bits[static_cast<std::size_t>(r.t - 1)] = static_cast<double>(r.bits_cum);
      if (writer) writer->write(r);
    };

    RunOutcome o;
    o.run_id = run_id;
    o.seed = seed;
    if (is_linear_family(cfg.algo)) {
      LinearConfig lc = to_linear_config(cfg, seed, run_id);
      lc.codebook = codebook;
      LinearRun r = cfg.algo == Algo::kIcLinUcb ? run_ic_linucb(lc, sink)
                    : cfg.algo == Algo::kLinUcb ? run_linucb(lc, sink)
                                                : run_ic_glmucb(lc, sink);
      o.final_cum_regret = r.internals.final_cum_regret;
      o.bits_sent = r.internals.bits_sent;
      o.metrics = linear_metrics(cfg.algo, r.internals);
    } else {
      const MabConfig mc = to_mab_config(cfg, seed, run_id);
      MabRun r = cfg.algo == Algo::kIcUcb ? run_ic_ucb(mc, sink) : run_ucb(mc, sink);
      o.final_cum_regret = r.internals.final_cum_regret;
      o.bits_sent = r.internals.bits_sent;
      o.metrics = mab_metrics(cfg.algo, r.internals);
    }
    if (writer) writer->close();
    if (write) write_sidecar(run_stem(dir, run_id) + "_diag.json", cfg, o);

    std::lock_guard<std::mutex> lock(mu);
    result.runs[idx] = std::move(o);
    parked.emplace(idx, std::make_pair(std::move(cum), std::move(bits)));
    while (!parked.empty() && parked.begin()->first == next_fold) {
      folder.fold(parked.begin()->second.first, parked.begin()->second.second);
      parked.erase(parked.begin());
      ++next_fold;
    }
  };

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= n_runs) return;
      try {
        execute(idx);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  result.mean_cum_regret = folder.mean;
  result.mean_bits = folder.bits;
  result.std_cum_regret.assign(folder.mean.size(), 0.0);
  if (folder.n > 1) {
    for (std::size_t t = 0; t < folder.m2.size(); ++t) {
      result.std_cum_regret[t] = std::sqrt(folder.m2[t] / static_cast<double>(folder.n - 1));
    }
  }

  for (const auto& o : result.runs) {
    for (const auto& [k, v] : o.metrics) {
      if (k.rfind("check_", 0) != 0) continue;
      const std::string name = k.substr(6);
      auto it = std::find_if(result.pass_rates.begin(), result.pass_rates.end(),
                             [&](const auto& p) { return p.first == name; });
      if (it == result.pass_rates.end()) {
        result.pass_rates.emplace_back(name, 0.0);
        it = result.pass_rates.end() - 1;
      }
      it->second += v / static_cast<double>(n_runs);
    }
  }

  if (write) {
    {
      std::ofstream s(dir / "summary.csv");
      if (!s) throw Error("cannot write " + (dir / "summary.csv").string());
      s << "t,n_runs,mean_cum_regret,std_cum_regret,mean_bits_cum\n";
      std::string line;
      for (std::size_t t = 0; t < result.mean_cum_regret.size(); ++t) {
        line.clear();
        line += std::to_string(t + 1);
        line += ',';
        line += std::to_string(n_runs);
        line += ',';
        line += format_double(result.mean_cum_regret[t]);
        line += ',';
        line += format_double(result.std_cum_regret[t]);
        line += ',';
        line += format_double(result.mean_bits[t]);
        line += '\n';
        s << line;
      }
    }
    std::ofstream dgn(dir / "diagnostics.csv");
    if (!dgn) throw Error("cannot write " + (dir / "diagnostics.csv").string());
    dgn << "run_id,seed,metric,value\n";
    for (const auto& o : result.runs) {
      for (const auto& [k, v] : o.metrics) {
        dgn << o.run_id << ',' << o.seed << ',' << k << ',' << format_double(v) << '\n';
      }
    }
    for (const auto& [k, v] : result.pass_rates) {
      dgn << "all,all,pass_rate_" << k << ',' << format_double(v) << '\n';
    }
  }
  return result;
}

std::string diag_report(const std::string& trace_path) {
  const std::vector<TraceRow> rows = read_csv(trace_path);
  std::ostringstream out;
  out << "trace: " << trace_path << "\n";
  if (rows.empty()) {
    out << "no rows\n";
    return out.str();
  }
  std::int64_t phase2 = 0, overflows = 0, covered = 0;
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.phase == 2) {
      ++phase2;
      covered += r.coverage_flag;
    }
    overflows += r.overflow_flag;
    if (i > 0 && r.cum_regret < rows[i - 1].cum_regret) monotone = false;
  }
  const TraceRow& last = rows.back();
  out << "rounds: " << rows.size() << "\n";
  out << "phase-2 rounds: " << phase2 << "\n";
  out << "final cum_regret: " << format_double(last.cum_regret) << "\n";
  out << "cum_regret nondecreasing: " << (monotone ? "yes" : "NO") << "\n";
  out << "overflow rounds: " << overflows << "\n";
  out << "coverage rate (phase 2): "
      << (phase2 > 0 ? format_double(static_cast<double>(covered) / static_cast<double>(phase2))
                     : std::string("n/a"))
      << "\n";
  out << "bits: " << last.bits_cum << "\n";

  std::string sidecar = trace_path;
  if (sidecar.size() > 4 && sidecar.compare(sidecar.size() - 4, 4, ".csv") == 0) {
    sidecar.resize(sidecar.size() - 4);
  }
  sidecar += "_diag.json";
  std::ifstream in(sidecar);
  if (!in) {
    out << "(no sidecar " << sidecar << ")\n";
    return out.str();
  }
  const nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
  const std::string algo = j.value("algo", "");
  out << "algo: " << algo << "\n";
  if (algo == "ic-linucb" || algo == "ic-glmucb") {
    const std::int64_t B = j.value("B", 0);
    const bool exact = last.bits_cum == B * (phase2 + 1);
    out << "bits = B*(phase-2 rounds + 1): " << (exact ? "yes" : "NO") << "\n";
  }
  for (const auto& [k, v] : j.at("metrics").items()) {
    if (k.rfind("check_", 0) == 0) {
      out << k.substr(6) << ": " << (v.get<double>() != 0 ? "pass" : "FAIL") << "\n";
    } else {
      out << "  " << k << " = " << format_double(v.get<double>()) << "\n";
    }
  }
  return out.str();
}

}  // namespace bitbandit

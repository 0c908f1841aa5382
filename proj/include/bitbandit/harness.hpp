#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bitbandit/glm.hpp"
#include "bitbandit/linucb.hpp"
#include "bitbandit/mab.hpp"
#include "bitbandit/trace.hpp"

namespace bitbandit {

enum class Algo { kIcLinUcb, kLinUcb, kIcGlmUcb, kIcUcb, kUcb };

std::string to_string(Algo a);
Algo parse_algo(const std::string& name);
bool is_linear_family(Algo a);

struct RunConfig {
  Algo algo = Algo::kIcLinUcb;
  int d = 2;
  std::int64_t T = 10000;
  int B = 12;
  int K = 32;
  std::vector<std::uint64_t> seeds{0};
  double L = 1.0;
  double M = 1.0;
  double lambda = 1.0;
  double epsilon = 0.5;
  double delta = 0.0;  // ≤ 0 means 1/T
  double c_explore = 10.0;
  double noise_sd = 1.0;
  std::string link = "identity";
  std::vector<double> means;  // MAB arm means; d follows their count
  double m = 0.0;
  std::string codec = "greedy";  // greedy | grid | identity
  std::uint64_t codebook_seed = 0;
  std::string codebook_path;  // load instead of building
  std::string out;
  bool write_traces = true;

  double resolved_delta() const { return delta > 0 ? delta : 1.0 / static_cast<double>(T); }
};

// "0..19", "3", "1,4,9", or a mix such as "0..3,10".
std::vector<std::uint64_t> parse_seeds(const std::string& text);

// Throws ConfigError naming the offending key.
void validate(const RunConfig& cfg);

// Overlays the keys present in a flat JSON object onto `base`.
RunConfig apply_json(const std::string& json_text, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base = {});

LinearConfig to_linear_config(const RunConfig& cfg, std::uint64_t seed, std::int64_t run_id);
MabConfig to_mab_config(const RunConfig& cfg, std::uint64_t seed, std::int64_t run_id);

// CSV trace format.
inline constexpr const char* kTraceHeader =
    "run_id,seed,t,action_index,reward,inst_regret,cum_regret,bits_cum,overflow_flag,"
    "coverage_flag,phase";

// Shortest form with at most 10 significant digits.
std::string format_double(double v);

class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void write(const TraceRow& row);
  void close();

 private:
  void flush_buffer();

  std::string path_;
  std::FILE* file_ = nullptr;
  std::string buf_;
};

void write_csv(const std::vector<TraceRow>& rows, const std::string& path);
std::vector<TraceRow> read_csv(const std::string& path);

// Per-run outcome of a sweep; metrics are ordered (name, value) pairs.
struct RunOutcome {
  std::int64_t run_id = 0;
  std::uint64_t seed = 0;
  double final_cum_regret = 0;
  std::int64_t bits_sent = 0;
  std::vector<std::pair<std::string, double>> metrics;

  std::optional<double> metric(const std::string& name) const;
};

struct SweepResult {
  std::vector<RunOutcome> runs;  // in seed-list order
  std::vector<double> mean_cum_regret;
  std::vector<double> std_cum_regret;  // sample std; 0 for a single run
  std::vector<double> mean_bits;
  // Fraction of runs passing each boolean check, in the order first seen.
  std::vector<std::pair<std::string, double>> pass_rates;
};

// Worker count: BITBANDIT_THREADS if set and positive, else the hardware count.
int worker_count();

// Runs every seed (in parallel when workers > 1) and, when cfg.out is set,
// writes run_<id>.csv, run_<id>_diag.json, summary.csv and diagnostics.csv.
// Results do not depend on the worker count.
SweepResult run_sweep(const RunConfig& cfg, int workers = 0);

// Report for one trace file plus its run_<id>_diag.json sidecar (if present).
std::string diag_report(const std::string& trace_path);

}  // namespace bitbandit

// bitbandit: run seeded bandit sweeps over a bit-limited channel.
//
//   bitbandit run --algo ic-linucb --d 2 --T 1000000 --B 12 --seeds 0..19 --out dir/
//   bitbandit diag dir/run_0.csv
//   bitbandit codebook --d 3 --epsilon 0.5 --seed 0 --out net.bin

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bitbandit/harness.hpp"

namespace bb = bitbandit;

namespace {

template <typename T>
void overlay(CLI::Option* opt, const T& value, T& dst) {
  if (opt->count() > 0) dst = value;
}

int run_command(const std::string& config_path, const bb::RunConfig& flags,
                const std::string& algo_flag, const std::string& seeds_flag,
                const std::string& means_flag, CLI::App& sub, bool no_traces) {
  bb::RunConfig cfg;
  if (!config_path.empty()) cfg = bb::load_config_file(config_path, cfg);

  if (!algo_flag.empty()) cfg.algo = bb::parse_algo(algo_flag);
  if (!seeds_flag.empty()) cfg.seeds = bb::parse_seeds(seeds_flag);
  if (!means_flag.empty()) {
    cfg.means.clear();
    std::size_t start = 0;
    while (start <= means_flag.size()) {
      const auto comma = means_flag.find(',', start);
      const std::string item = means_flag.substr(start, comma - start);
      try {
        cfg.means.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw bb::ConfigError("means: bad value '" + item + "'");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  overlay(sub.get_option("--d"), flags.d, cfg.d);
  overlay(sub.get_option("--T"), flags.T, cfg.T);
  overlay(sub.get_option("--B"), flags.B, cfg.B);
  overlay(sub.get_option("--K"), flags.K, cfg.K);
  overlay(sub.get_option("--L"), flags.L, cfg.L);
  overlay(sub.get_option("--M"), flags.M, cfg.M);
  overlay(sub.get_option("--lambda"), flags.lambda, cfg.lambda);
  overlay(sub.get_option("--epsilon"), flags.epsilon, cfg.epsilon);
  overlay(sub.get_option("--delta"), flags.delta, cfg.delta);
  overlay(sub.get_option("--c_explore"), flags.c_explore, cfg.c_explore);
  overlay(sub.get_option("--noise_sd"), flags.noise_sd, cfg.noise_sd);
  overlay(sub.get_option("--link"), flags.link, cfg.link);
  overlay(sub.get_option("--m"), flags.m, cfg.m);
  overlay(sub.get_option("--codec"), flags.codec, cfg.codec);
  overlay(sub.get_option("--codebook_seed"), flags.codebook_seed, cfg.codebook_seed);
  overlay(sub.get_option("--codebook"), flags.codebook_path, cfg.codebook_path);
  overlay(sub.get_option("--out"), flags.out, cfg.out);
  if (no_traces) cfg.write_traces = false;

  const bb::SweepResult res = bb::run_sweep(cfg);
  const std::size_t n = res.runs.size();
  double mean = 0;
  for (const auto& r : res.runs) mean += r.final_cum_regret / static_cast<double>(n);
  std::cout << bb::to_string(cfg.algo) << ": " << n << " run(s), T = " << cfg.T
            << ", mean final regret " << bb::format_double(mean) << "\n";
  for (const auto& [name, rate] : res.pass_rates) {
    std::cout << "  " << name << ": " << bb::format_double(rate) << "\n";
  }
  if (!cfg.out.empty()) std::cout << "wrote " << cfg.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic bandits over a bit-limited channel"};
  app.require_subcommand(1);

  bb::RunConfig flags;
  std::string config_path, algo, seeds, means;
  bool no_traces = false;
  auto* run = app.add_subcommand("run", "Run a seeded sweep and write CSV outputs");
  run->add_option("--config", config_path, "Flat JSON config file; flags override it");
  run->add_option("--algo", algo, "ic-linucb | linucb | ic-glmucb | ic-ucb | ucb");
  run->add_option("--d", flags.d, "Dimension");
  run->add_option("--T", flags.T, "Horizon");
  run->add_option("--B", flags.B, "Bits per round");
  run->add_option("--K", flags.K, "Candidate actions");
  run->add_option("--seeds,--seed", seeds, "Seed list, e.g. 0..19 or 1,5,9");
  run->add_option("--L", flags.L, "Action norm bound");
  run->add_option("--M", flags.M, "Parameter norm bound");
  run->add_option("--lambda", flags.lambda, "Ridge regularization");
  run->add_option("--epsilon", flags.epsilon, "Net resolution");
  run->add_option("--delta", flags.delta, "Confidence level (default 1/T)");
  run->add_option("--c_explore", flags.c_explore,
                  "Exploration-length constant (default 10; a practical knob)");
  run->add_option("--noise_sd", flags.noise_sd, "Reward noise standard deviation");
  run->add_option("--link", flags.link, "identity | logistic | scaled-logistic:<c>");
  run->add_option("--means", means, "Arm means for ic-ucb/ucb, comma separated");
  run->add_option("--m", flags.m, "Mean bound for ic-ucb (default max(1, max|mean|))");
  run->add_option("--codec", flags.codec, "greedy | grid | identity");
  run->add_option("--codebook_seed", flags.codebook_seed, "Seed of the shared net");
  run->add_option("--codebook", flags.codebook_path, "Load the net from a saved file");
  run->add_option("--out", flags.out, "Output directory");
  run->add_flag("--no-traces", no_traces, "Skip per-run trace CSVs");

  std::string trace;
  auto* diag = app.add_subcommand("diag", "Print the diagnostic report for one trace");
  diag->add_option("trace", trace, "run_<id>.csv")->required();

  int cb_d = 2;
  double cb_eps = 0.5;
  std::uint64_t cb_seed = 0;
  std::string cb_out, cb_kind = "greedy";
  auto* cbcmd = app.add_subcommand("codebook", "Build a unit-ball net and save it");
  cbcmd->add_option("--d", cb_d, "Dimension");
  cbcmd->add_option("--epsilon", cb_eps, "Resolution");
  cbcmd->add_option("--seed", cb_seed, "Construction seed");
  cbcmd->add_option("--kind", cb_kind, "greedy | grid");
  cbcmd->add_option("--out", cb_out, "Output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, flags, algo, seeds, means, *run, no_traces);
    if (*diag) {
      std::cout << bb::diag_report(trace);
      return 0;
    }
    if (*cbcmd) {
      const auto cb = cb_kind == "grid" ? bb::build_grid_net<double>(cb_d, cb_eps)
                                        : bb::build_unit_net<double>(cb_d, cb_eps, cb_seed);
      std::cout << "centers: " << cb.size() << ", bits needed: "
                << bb::required_bits(static_cast<std::uint64_t>(cb.size()) + 1) << "\n";
      if (!cb_out.empty()) bb::save_codebook(cb, cb_out);
      return 0;
    }
  } catch (const bb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

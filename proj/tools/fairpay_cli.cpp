// Command-line front end: run, sweep, probe, audit-replay.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "fairpay/config.hpp"
#include "fairpay/harness.hpp"

namespace {

constexpr const char* kOutputDirEnv = "FAIRPAY_OUTPUT_DIR";

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_path, "YAML config file (flat key: value)");
  for (const auto& key : fairpay::config_keys()) {
    const std::string name(key.name);
    cmd->add_option("--" + name, flags.values[name], std::string(key.help));
  }
}

fairpay::RunConfig resolve(const CLI::App* cmd, const ConfigFlags& flags) {
  fairpay::RunConfig cfg;
  if (!flags.config_path.empty()) cfg = fairpay::load_config(flags.config_path);
  for (const auto& [name, text] : flags.values) {
    if (cmd->count("--" + name) > 0) fairpay::apply_setting(cfg, name, text);
  }
  fairpay::validate(cfg);
  return cfg;
}

std::string output_path(const fairpay::RunConfig& cfg, const std::string& fallback_name) {
  if (!cfg.output.empty()) return cfg.output;
  const char* dir = std::getenv(kOutputDirEnv);
  return (std::filesystem::path(dir ? dir : ".") / fallback_name).string();
}

int cmd_run(const fairpay::RunConfig& cfg) {
  const auto result = fairpay::run(cfg);
  const auto path = output_path(cfg, fmt::format("trace_{}_{}.csv", result.scheme, result.seed));
  fairpay::write_trace(result, path);
  fmt::print("trace={}\nscheme={}\ninstance={}\nseed={}\nT={}\nunfair_rounds={}\ncost={:.12g}\n"
             "expected_cost={:.12g}\nregret={:.12g}\nfind_chained_calls={}\nchain_anomalies={}\nclip_events={}\n",
             path, result.scheme, result.instance, result.seed, result.horizon, result.unfair_rounds, result.cost,
             result.expected_cost, result.regret, result.find_chained_calls, result.chain_anomalies.size(),
             result.clip_events);
  return 0;
}

int cmd_sweep(const fairpay::RunConfig& cfg) {
  const auto horizons = cfg.horizons.empty() ? std::vector<std::size_t>{cfg.horizon} : cfg.horizons;
  const auto entries = fairpay::sweep(cfg, horizons, cfg.seeds);
  const auto path = output_path(cfg, fmt::format("sweep_{}.csv", fairpay::to_string(cfg.scheme)));
  std::ofstream runs(path);
  if (!runs) throw std::runtime_error("cannot open sweep file for writing: " + path);
  fairpay::write_sweep(entries, runs);

  const auto agg_path = std::filesystem::path(path).replace_extension().string() + "_aggregate.csv";
  std::ofstream agg(agg_path);
  if (!agg) throw std::runtime_error("cannot open aggregate file for writing: " + agg_path);
  const auto table = fairpay::aggregate(entries);
  fairpay::write_aggregate(table, agg);
  fairpay::write_aggregate(table, std::cout);
  fmt::print("runs={}\naggregate={}\n", path, agg_path);
  return 0;
}

int cmd_probe(const fairpay::RunConfig& cfg) {
  const auto r = fairpay::unfairness_probe(cfg, cfg.trials);
  fmt::print("trials={}\nunfair_runs={}\nunfair_fraction={:.12g}\nmean_cost={:.12g}\nmean_regret={:.12g}\n"
             "mean_round_regret={:.12g}\n",
             r.trials, r.unfair_runs, r.unfair_fraction, r.mean_cost, r.mean_regret, r.mean_round_regret);
  return 0;
}

int cmd_audit_replay(const std::string& path, bool count_warm_start) {
  const auto records = fairpay::read_trace(path);
  const auto s = fairpay::audit_replay(records, count_warm_start);
  fmt::print("rows={}\nwarm_start_rows={}\nunfair_rounds={}\ncost={:.12g}\nexpected_cost={:.12g}\nregret={:.12g}\n"
             "conservation_violations={}\n",
             s.rows, s.warm_start_rows, s.unfair_rounds, s.cost, s.expected_cost, s.regret,
             s.conservation_violations.size());
  if (!s.conservation_violations.empty()) {
    std::cerr << "error: realized cost differs from the chosen arm's payment on "
              << s.conservation_violations.size() << " rows\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for payment schemes that steer a myopic bandit agent toward fair play"};
  app.require_subcommand(1);

  ConfigFlags run_flags, sweep_flags, probe_flags;
  auto* run = app.add_subcommand("run", "run one seeded simulation and write its trace CSV");
  add_config_flags(run, run_flags);
  auto* sweep = app.add_subcommand("sweep", "run every (T, seed) pair and write per-run and aggregate CSVs");
  add_config_flags(sweep, sweep_flags);
  auto* probe = app.add_subcommand("probe", "measure how often runs contain an unfair round");
  add_config_flags(probe, probe_flags);

  std::string trace_path;
  bool count_warm_start = false;
  auto* replay = app.add_subcommand("audit-replay", "recount fairness, cost and regret from a saved trace");
  replay->add_option("trace", trace_path, "trace CSV written by `run`")->required();
  replay->add_flag("--count-warm-start", count_warm_start, "count unfair warm-start rows");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(resolve(run, run_flags));
    if (*sweep) return cmd_sweep(resolve(sweep, sweep_flags));
    if (*probe) return cmd_probe(resolve(probe, probe_flags));
    if (*replay) return cmd_audit_replay(trace_path, count_warm_start);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

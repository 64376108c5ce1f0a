// mptp: spectrum sensing with a multi-power-level primary user.
//
//   mptp regions      decision thresholds and masked levels
//   mptp sweep        local P_fa / P_d / P_dis over samples or SNR
//   mptp montecarlo   analytic vs simulated decision matrix
//   mptp fusion       cooperative majority / optimal fusion sweep
//   mptp np-threshold Neyman-Pearson threshold for a target P_fa
//   mptp decide       per-energy decisions (both strategies, Bayes risk)
//   mptp config       print the resolved configuration as JSON

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/run_config.hpp"

namespace {

using namespace mptp::cli;

struct Overrides {
  std::string config;
  std::optional<std::string> strategy;
  std::optional<double> snr_db;
  std::optional<int> samples;
  std::optional<int> users;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> rule;
  std::optional<int> delta;
  std::optional<std::string> axis;
  std::optional<std::string> grid;
  std::optional<double> target_pfa;
  std::optional<unsigned> workers;
  std::optional<std::string> sampling;
  std::optional<std::string> costs;
  std::string out;
  std::vector<double> energies;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--strategy", o.strategy, "local sensing strategy: 1 or 2");
  cmd->add_option("--snr-db", o.snr_db, "average SNR in dB");
  cmd->add_option("--samples", o.samples, "samples per sensing period (M)");
  cmd->add_option("--users", o.users, "cooperating SUs (K)");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per hypothesis");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
  cmd->add_option("--rule", o.rule, "fusion rule: majority, optimal or both");
  cmd->add_option("--delta", o.delta, "restrict fusion offset-error columns to one delta");
  cmd->add_option("--axis", o.axis, "sweep axis: samples, snr_db or users");
  cmd->add_option("--grid", o.grid, "sweep grid, start:stop:step or a,b,c");
  cmd->add_option("--target-pfa", o.target_pfa, "Neyman-Pearson false-alarm target");
  cmd->add_option("--workers", o.workers, "Monte Carlo worker threads (0 = all cores)");
  cmd->add_option("--sampling", o.sampling, "Monte Carlo sampling: direct_gamma or per_sample");
  cmd->add_option("--costs", o.costs, "JSON cost matrix for Bayes-risk decisions");
  cmd->add_option("--out", o.out, "write CSV here instead of stdout");
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config_file(o.config);
  if (o.strategy) cfg.strategy = parse_strategy(*o.strategy);
  if (o.snr_db) cfg.scenario.snr_db = *o.snr_db;
  if (o.samples) cfg.scenario.samples = *o.samples;
  if (o.users) cfg.scenario.users = *o.users;
  if (o.trials) cfg.trials = *o.trials;
  if (o.seed) cfg.seed = *o.seed;
  if (o.rule) cfg.rule = parse_rule(*o.rule);
  if (o.delta) cfg.delta = *o.delta;
  if (o.axis) cfg.axis = parse_axis(*o.axis);
  if (o.grid) cfg.grid = parse_grid(*o.grid);
  if (o.target_pfa) cfg.target_pfa = *o.target_pfa;
  if (o.workers) cfg.workers = *o.workers;
  if (o.sampling) cfg.sampling = parse_sampling(*o.sampling);
  if (o.costs) cfg.cost_matrix = *o.costs;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum sensing and recognition for a multi-power-level primary user"};
  app.require_subcommand(1);
  Overrides o;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"regions", "decision thresholds and masked levels"},
      {"sweep", "local detection and discrimination sweep"},
      {"montecarlo", "analytic vs Monte Carlo decision matrix"},
      {"fusion", "cooperative fusion sweep"},
      {"np-threshold", "Neyman-Pearson threshold for --target-pfa"},
      {"decide", "decisions for given energies"},
      {"config", "print the resolved configuration"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common_options(cmd, o);
    subs.push_back(cmd);
  }
  subs[5]->add_option("--energy", o.energies, "received energy values")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve(o);
    CommandOutput result;
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "regions") result = cmd_regions(cfg);
    else if (name == "sweep") result = cmd_sweep(cfg);
    else if (name == "montecarlo") result = cmd_montecarlo(cfg);
    else if (name == "fusion") result = cmd_fusion(cfg);
    else if (name == "np-threshold") result = cmd_np_threshold(cfg);
    else if (name == "decide") result = cmd_decide(cfg, o.energies);
    else result.csv = to_config_json(cfg);

    for (const auto& note : result.notes) std::cerr << note << '\n';
    if (o.out.empty()) {
      std::cout << result.csv;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw ConfigError("out: cannot write '" + o.out + "'");
      file << result.csv;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

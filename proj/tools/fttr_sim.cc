// SPDX-License-Identifier: Apache-2.0
// fttr_sim: run, compare and validate FTTR scenarios.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fttr/scenario/config.h"
#include "fttr/scenario/metrics.h"
#include "fttr/scenario/network.h"

namespace fs = std::filesystem;
using namespace fttr;
using namespace fttr::scenario;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

std::string slurp(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw std::runtime_error{"cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out{p, std::ios::binary};
  if (!out) throw std::runtime_error{"cannot write " + p.string()};
  out << text;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string duration;
  std::string out;
  std::string savings;
  bool dump_schedule = false;
};

int config_error(const std::string& path, const ConfigError& e) {
  std::cerr << path << ':' << e.line() << ':' << e.column() << ": " << e.what() << '\n';
  return kExitConfig;
}

int cmd_run(const RunArgs& a) {
  ScenarioConfig cfg;
  try {
    cfg = load_scenario(a.config);
  } catch (const ConfigError& e) {
    return config_error(a.config, e);
  }
  if (a.seed) cfg.seed = *a.seed;
  if (!a.mode.empty()) {
    auto m = scheduling::parse_scheduler_mode(a.mode);
    if (!m) {
      std::cerr << "--mode: unknown mode '" << a.mode << "'\n";
      return kExitConfig;
    }
    apply_mode(cfg, *m);
  }
  if (!a.duration.empty()) {
    auto d = parse_duration(a.duration);
    if (!d || d->count() <= 0) {
      std::cerr << "--duration: expected a positive duration such as 10s\n";
      return kExitConfig;
    }
    cfg.horizon = *d;
  }
  if (!a.savings.empty()) cfg.energy.savings = a.savings == "on";

  const fs::path out = !a.out.empty() ? fs::path{a.out} : !cfg.output_dir.empty() ? fs::path{cfg.output_dir}
                                                                                    : fs::path{"out"} / cfg.name;
  RunMetrics m;
  FttrNetwork net{cfg};
  net.record_schedule(a.dump_schedule);
  try {
    m = net.run();
  } catch (const InvariantBreach& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  }

  fs::create_directories(out);
  write_file(out / "summary.json", summary_json(m));
  write_file(out / "flows.csv", flows_csv(m));
  write_file(out / "alarms.log", join_lines(net.alarms().lines()));
  if (a.dump_schedule) write_file(out / "schedule.log", join_lines(net.schedule_log()));

  std::cout << cfg.name << ": " << m.flows.size() << " flows, " << m.events << " events, digest " << m.digest
            << ", written to " << out.string() << '\n';
  return 0;
}

int cmd_validate(const std::string& path) {
  try {
    const ScenarioConfig cfg = load_scenario(path);
    std::cout << path << ": ok (" << cfg.sfus.size() << " SFUs, " << cfg.flows.size() + cfg.ofdma.size()
              << " flows, fingerprint " << scenario_fingerprint(cfg) << ")\n";
    return 0;
  } catch (const ConfigError& e) {
    return config_error(path, e);
  }
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& out) {
  const std::string report = compare_summaries(slurp(a), slurp(b));
  if (out.empty())
    std::cout << report;
  else
    write_file(out, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FTTR network simulator"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its metrics");
  run_cmd->add_option("config", run.config, "Scenario file")->required();
  run_cmd->add_option("--seed", run.seed, "Override the master seed");
  run_cmd->add_option("--mode", run.mode, "distributed | centralized | mac_integrated | phy_relay");
  run_cmd->add_option("--duration", run.duration, "Override the horizon, e.g. 10s");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--savings", run.savings, "Energy savings on|off")->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_flag("--dump-schedule", run.dump_schedule, "Write schedule.log");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("config", validate_path, "Scenario file")->required();

  std::string cmp_a, cmp_b, cmp_out;
  auto* compare_cmd = app.add_subcommand("compare", "Deltas between two summary.json files");
  compare_cmd->add_option("a", cmp_a, "Summary A")->required();
  compare_cmd->add_option("b", cmp_b, "Summary B")->required();
  compare_cmd->add_option("--out", cmp_out, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*compare_cmd) return cmd_compare(cmp_a, cmp_b, cmp_out);
  } catch (const CompareError& e) {
    std::cerr << "compare: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

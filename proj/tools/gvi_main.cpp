// Command-line front end: `gvi run ...` and `gvi summarize ...`.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gvi/runner.hpp"

namespace {

std::pair<std::string, double> key_value(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw gvi::UsageError("expected key=value, got '" + text + "'");
  }
  const std::string value = text.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw gvi::UsageError("'" + value + "' is not a number");
  }
  return {text.substr(0, eq), v};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained Hamiltonian integrators with impacts"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "integrate a scenario with one or more methods");
  std::string config_path, scenario, methods, out_dir;
  double h = 0.0, duration = 0.0;
  int decimate = 0;
  unsigned long long seed = 0;
  std::vector<std::string> sets, tols;
  run_cmd->add_option("--config", config_path, "INI-style run configuration");
  run_cmd->add_option("--scenario", scenario, "particle1d, pogo, spring-sphere, "
                                              "spring-sphere-mixed, oscillator, cradle, lj");
  run_cmd->add_option("--method", methods, "comma-separated method tokens");
  auto* h_opt = run_cmd->add_option("--h", h, "time step");
  auto* dur_opt = run_cmd->add_option("--duration", duration, "simulated time");
  run_cmd->add_option("--out", out_dir, "output directory");
  auto* dec_opt = run_cmd->add_option("--decimate", decimate, "keep every k-th step");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "random seed");
  run_cmd->add_option("--set", sets, "scenario parameter override key=value");
  run_cmd->add_option("--tol", tols, "tolerance override key=value");

  auto* sum_cmd = app.add_subcommand("summarize", "summary table for trace CSV files");
  std::vector<std::string> traces;
  std::string summary_csv;
  sum_cmd->add_option("traces", traces, "trace files")->required();
  sum_cmd->add_option("--csv", summary_csv, "also write the table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? gvi::kExitOk : gvi::kExitUsage;
  }

  if (sum_cmd->parsed()) return gvi::summarize_files(traces, std::cout, summary_csv);

  gvi::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot read " << config_path << '\n';
        return gvi::kExitIo;
      }
      std::stringstream text;
      text << in.rdbuf();
      cfg = gvi::parse_run_config(text.str());
    }
    if (!scenario.empty()) cfg.scenario.name = gvi::parse_scenario_name(scenario);
    if (!methods.empty()) {
      cfg.methods.clear();
      std::stringstream ss(methods);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) cfg.methods.push_back(gvi::parse_method(tok));
      }
    }
    if (h_opt->count()) cfg.h = h;
    if (dur_opt->count()) cfg.duration = duration;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (dec_opt->count()) cfg.decimate = decimate;
    if (seed_opt->count()) cfg.seed = seed;
    for (const auto& s : sets) cfg.scenario.overrides.insert_or_assign(key_value(s).first, key_value(s).second);
    for (const auto& t : tols) cfg.tolerance_overrides.insert_or_assign(key_value(t).first, key_value(t).second);
  } catch (const gvi::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return gvi::kExitUsage;
  }
  return gvi::run(cfg, std::cerr);
}

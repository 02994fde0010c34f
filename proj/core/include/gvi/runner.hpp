#pragma once

#include <iosfwd>
#include <string>

#include "gvi/diagnostics.hpp"
#include "gvi/run_config.hpp"
#include "gvi/scenarios.hpp"

namespace gvi {

struct SimulationOptions {
  double duration = 0.0;
  int decimate = 1;
  double blowup_factor = 10.0;
  TraceMetadata metadata;
};

struct SimulationOutcome {
  Trace trace;
  bool failed = false;
  double failure_time = 0.0;
  std::string failure_message;
  std::size_t steps = 0;
};

/// Steps `initial` for round(duration/h) steps. Step failures and the
/// blow-up guard end the run early; the partial trace is returned with a
/// final StepFailure row.
SimulationOutcome simulate(const MechanicalSystem& sys, const PhaseState& initial,
                           const IntegratorConfig& cfg, const SimulationOptions& options);

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitStepFailure = 3, kExitIo = 4 };

/// Runs every method of the config, writes `<out>/<scenario>_<label>.csv`
/// per method plus `summary.txt` and `summary.csv`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& log);

/// Reads trace files and prints the summary table; returns an ExitCode.
int summarize_files(const std::vector<std::string>& paths, std::ostream& out,
                    const std::string& csv_path = "");

}  // namespace gvi

#include "gvi/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gvi/trace_io.hpp"

namespace gvi {
namespace {

std::optional<double> verlet_step_of(const MechanicalSystem& sys, const IntegratorConfig& cfg) {
  if (cfg.quadrature.rule() != QuadratureRule::Verlet || !sys.has_potential_hessian()) return {};
  return cfg.step();
}

TraceTable table_of(const Trace& trace, const std::string& source) {
  std::stringstream buf;
  write_trace_csv(buf, trace);
  return read_trace_csv(buf, source);
}

}  // namespace

SimulationOutcome simulate(const MechanicalSystem& sys, const PhaseState& initial,
                           const IntegratorConfig& cfg, const SimulationOptions& options) {
  if (!(options.duration > 0.0)) throw ContractViolation("simulate: duration must be positive");
  if (options.decimate < 1) throw ContractViolation("simulate: decimate must be >= 1");
  const double h = cfg.step();
  const auto verlet_step = verlet_step_of(sys, cfg);
  const long long steps = std::llround(options.duration / h);

  SimulationOutcome out;
  out.trace = Trace(options.metadata);
  Stepper stepper(sys, cfg);
  PhaseState s = initial;
  s.t = 0.0;
  const double h0 = hamiltonian(sys, s);
  const double guard = options.blowup_factor * std::max(1.0, std::abs(h0));
  out.trace.push(s, record(sys, s, StepEvent::None, Vec(), verlet_step));

  for (long long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;
    StepResult r;
    std::string failure;
    try {
      r = stepper.step(s);
      r.state.t = t;
      if (!r.state.finite()) {
        failure = "non-finite state";
      } else if (std::abs(hamiltonian(sys, r.state) - h0) > guard) {
        failure = "energy blow-up guard";
        s = r.state;
      }
    } catch (const Error& e) {
      failure = e.what();
    }
    if (!failure.empty()) {
      PhaseState last = s;
      last.t = t;
      out.trace.push(last, record(sys, last, StepEvent::StepFailure, Vec(), verlet_step));
      out.failed = true;
      out.failure_time = t;
      out.failure_message = failure;
      out.steps = static_cast<std::size_t>(k);
      return out;
    }
    s = r.state;
    out.steps = static_cast<std::size_t>(k);
    if (k % options.decimate == 0 || k == steps) {
      Vec lambda = r.impulse.size() > 0 ? r.impulse : r.force;
      out.trace.push(s, record(sys, s, r.event, lambda, verlet_step));
    }
  }
  return out;
}

int run(const RunConfig& config, std::ostream& log) {
  std::vector<SummaryRow> rows;
  bool any_failed = false;
  try {
    config.validate();
    ScenarioSpec spec = config.scenario;
    const auto defaults = scenario_defaults(spec.name);
    if (defaults.count("seed") && !spec.overrides.count("seed")) {
      spec.overrides["seed"] = static_cast<double>(config.seed);
    }
    const Scenario scenario = build_scenario(spec);
    const double h = config.h.value_or(scenario.config.step());
    const Tolerances tol = apply_tolerance_overrides(config.tolerance_overrides);

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
      log << "error: cannot create " << config.out_dir << ": " << ec.message() << '\n';
      return kExitIo;
    }

    for (const MethodSpec& method : config.methods) {
      const IntegratorConfig cfg = resolve_method(method, scenario.config, h, tol);
      SimulationOptions opts;
      opts.duration = config.duration;
      opts.decimate = config.decimate;
      opts.blowup_factor = config.blowup_factor;
      opts.metadata = {to_string(spec.name), method.label, h, config.seed};
      const SimulationOutcome outcome = simulate(scenario.system, scenario.initial, cfg, opts);

      const std::string name = std::string(to_string(spec.name)) + "_" + method.label + ".csv";
      const auto path = std::filesystem::path(config.out_dir) / name;
      std::ofstream file(path);
      write_trace_csv(file, outcome.trace);
      if (!file) {
        log << "error: cannot write " << path.string() << '\n';
        return kExitIo;
      }
      rows.push_back(summarize(table_of(outcome.trace, name)));
      log << method.label << ": " << outcome.steps << " steps";
      if (outcome.failed) {
        any_failed = true;
        log << ", step failure at t=" << outcome.failure_time << " (" << outcome.failure_message
            << ")";
      }
      log << '\n';
    }

    std::ofstream text(std::filesystem::path(config.out_dir) / "summary.txt");
    write_summary_text(text, rows);
    std::ofstream csv(std::filesystem::path(config.out_dir) / "summary.csv");
    write_summary_csv(csv, rows);
    if (!text || !csv) {
      log << "error: cannot write summary files\n";
      return kExitIo;
    }
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigurationError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return any_failed ? kExitStepFailure : kExitOk;
}

int summarize_files(const std::vector<std::string>& paths, std::ostream& out,
                    const std::string& csv_path) {
  if (paths.empty()) {
    out << "usage error: summarize needs at least one trace\n";
    return kExitUsage;
  }
  std::vector<SummaryRow> rows;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) {
      out << "error: cannot read " << path << '\n';
      return kExitIo;
    }
    try {
      rows.push_back(summarize(read_trace_csv(in, path)));
    } catch (const ParseError& e) {
      out << "parse error: " << e.what() << " (line " << e.line() << ")\n";
      return kExitIo;
    }
  }
  write_summary_text(out, rows);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    write_summary_csv(csv, rows);
    if (!csv) {
      out << "error: cannot write " << csv_path << '\n';
      return kExitIo;
    }
  }
  return kExitOk;
}

}  // namespace gvi

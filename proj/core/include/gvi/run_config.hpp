#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gvi/integrators.hpp"
#include "gvi/scenarios.hpp"

namespace gvi {

/// Raised for malformed configuration files or flags (CLI exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A method token as given on the command line, e.g. "gvi-verlet",
/// "collision:energy=numerical", "newmark:beta=0:gamma=0.5".
struct MethodSpec {
  std::string label;
  std::string family;
  std::map<std::string, std::string> options;
};

/// Throws UsageError for an unknown family or option.
MethodSpec parse_method(const std::string& token);

/// Turns a method spec into a concrete configuration, using the scenario's
/// recommended quadrature rule unless the token names one.
IntegratorConfig resolve_method(const MethodSpec& spec, const IntegratorConfig& recommended,
                                double h, const Tolerances& tolerances);

struct RunConfig {
  ScenarioSpec scenario;
  std::vector<MethodSpec> methods;
  std::optional<double> h;  ///< defaults to the scenario's recommended step
  double duration = 0.0;
  std::string out_dir = ".";
  int decimate = 1;
  unsigned long long seed = 42;
  std::map<std::string, double> tolerance_overrides;
  /// A run stops with a step failure once |H − H0| > factor·max(1, |H0|).
  double blowup_factor = 10.0;

  /// Throws UsageError for duration <= 0, no methods, or decimate < 1.
  void validate() const;
};

/// Parses the INI-style configuration text:
///
///   scenario = pogo
///   h = 0.1
///   duration = 1000
///   methods = collision, extended-reflection
///   [set]
///   k = 10
///   [tol]
///   eps_active = 1e-9
///   [method collision]
///   energy = numerical
///
/// Keys outside a section are run-level; `[method NAME]` adds a method with
/// the section's keys as options. Throws UsageError with the line number.
RunConfig parse_run_config(const std::string& text);

Tolerances apply_tolerance_overrides(const std::map<std::string, double>& overrides);

}  // namespace gvi

#pragma once

#include <map>
#include <string>
#include <vector>

#include "gvi/integrators.hpp"
#include "gvi/system.hpp"

namespace gvi {

enum class ScenarioName {
  Particle1D,
  PogoStick,
  SpringSphere,
  SpringSphereMixed,
  NonlinearOscillator,
  NewtonsCradle,
  LennardJonesChain,
};

/// CLI spelling: particle1d, pogo, spring-sphere, spring-sphere-mixed,
/// oscillator, cradle, lj.
const char* to_string(ScenarioName name);
/// Throws ConfigurationError for an unknown name.
ScenarioName parse_scenario_name(const std::string& text);
std::vector<ScenarioName> all_scenarios();

struct ScenarioSpec {
  ScenarioName name = ScenarioName::Particle1D;
  std::map<std::string, double> overrides;
};

struct Scenario {
  MechanicalSystem system;
  PhaseState initial;
  IntegratorConfig config;  ///< recommended method, quadrature and step
};

/// Parameter keys accepted as overrides for a scenario, with defaults.
std::map<std::string, double> scenario_defaults(ScenarioName name);

/// Builds the system, the initial state and a recommended configuration.
/// Throws ConfigurationError for an override key the scenario does not know.
Scenario build_scenario(const ScenarioSpec& spec);

}  // namespace gvi

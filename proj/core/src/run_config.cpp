#include "gvi/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace gvi {
namespace {

const std::set<std::string>& families() {
  static const std::set<std::string> f{"gvi",           "dsi",     "direct-midpoint",
                                       "direct-endpoint", "newmark", "imex-newmark",
                                       "collision",     "extended-reflection"};
  return f;
}

const std::set<std::string>& option_keys() {
  static const std::set<std::string> k{"energy", "reflection", "beta",   "gamma",
                                       "alpha",  "linearize",  "rule",   "max_events"};
  return k;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
}

bool to_bool(const std::string& text, const std::string& what) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw UsageError(what + ": '" + text + "' is not a boolean");
}

QuadratureRule to_rule(const std::string& text) {
  if (text == "verlet") return QuadratureRule::Verlet;
  if (text == "midpoint") return QuadratureRule::Midpoint;
  throw UsageError("unknown quadrature rule '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

void set_option(MethodSpec& spec, const std::string& key, const std::string& value) {
  if (!option_keys().count(key)) {
    throw UsageError("method '" + spec.label + "': unknown option '" + key + "'");
  }
  spec.options[key] = value;
}

}  // namespace

MethodSpec parse_method(const std::string& token) {
  const auto parts = split(trim(token), ':');
  if (parts.empty() || parts[0].empty()) throw UsageError("empty method token");
  MethodSpec spec;
  spec.label = trim(token);
  std::replace(spec.label.begin(), spec.label.end(), ':', '_');
  std::replace(spec.label.begin(), spec.label.end(), '=', '-');

  const std::string base = parts[0];
  if (families().count(base)) {
    spec.family = base;
  } else {
    for (const char* rule : {"verlet", "midpoint"}) {
      const std::string suffix = std::string("-") + rule;
      if (base.size() > suffix.size() &&
          base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0 &&
          families().count(base.substr(0, base.size() - suffix.size()))) {
        spec.family = base.substr(0, base.size() - suffix.size());
        spec.options["rule"] = rule;
      }
    }
    if (spec.family.empty()) throw UsageError("unknown method '" + base + "'");
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) {
      throw UsageError("method option '" + parts[i] + "' must be key=value");
    }
    set_option(spec, trim(parts[i].substr(0, eq)), trim(parts[i].substr(eq + 1)));
  }
  return spec;
}

IntegratorConfig resolve_method(const MethodSpec& spec, const IntegratorConfig& recommended,
                                double h, const Tolerances& tolerances) {
  IntegratorConfig cfg = recommended;
  cfg.tolerances = tolerances;
  QuadratureRule rule = recommended.quadrature.rule();
  const auto& o = spec.options;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = o.find(key);
    return it == o.end() ? nullptr : &it->second;
  };
  if (auto* v = get("rule")) rule = to_rule(*v);
  cfg.quadrature = Quadrature(rule, h);

  const std::string& f = spec.family;
  cfg.linearization = Linearization::Off;
  if (f == "gvi") {
    cfg.method = Method::GVI;
  } else if (f == "dsi") {
    cfg.method = Method::DSI;
  } else if (f == "direct-midpoint" || f == "direct-endpoint") {
    cfg.method = Method::DirectMidpoint;
    cfg.alpha = f == "direct-midpoint" ? 0.5 : 1.0;
  } else if (f == "newmark" || f == "imex-newmark") {
    cfg.method = Method::Newmark;
    cfg.imex = f == "imex-newmark";
    cfg.beta = 0.25;
    cfg.gamma = 0.5;
  } else if (f == "collision") {
    cfg.method = Method::CollisionIntegrator;
  } else if (f == "extended-reflection") {
    cfg.method = Method::ExtendedReflection;
  } else {
    throw UsageError("unknown method family '" + f + "'");
  }

  cfg.energy = EnergyFunction::continuous();
  if (auto* v = get("energy")) {
    if (*v == "numerical") {
      cfg.energy = EnergyFunction::verlet_numerical(h);
    } else if (*v != "continuous") {
      throw UsageError("energy must be continuous or numerical, got '" + *v + "'");
    }
  }
  cfg.reflection = ReflectionModel::Generalized;
  if (auto* v = get("reflection")) {
    if (*v == "moreau") {
      cfg.reflection = ReflectionModel::Moreau;
    } else if (*v != "generalized") {
      throw UsageError("reflection must be generalized or moreau, got '" + *v + "'");
    }
  }
  if (auto* v = get("beta")) cfg.beta = to_number(*v, "beta");
  if (auto* v = get("gamma")) cfg.gamma = to_number(*v, "gamma");
  if (auto* v = get("alpha")) cfg.alpha = to_number(*v, "alpha");
  if (auto* v = get("linearize")) {
    if (*v == "predictor") {
      cfg.linearization = Linearization::Predictor;
    } else if (*v == "start") {
      cfg.linearization = Linearization::StepStart;
    } else {
      cfg.linearization = to_bool(*v, "linearize") ? Linearization::StepStart : Linearization::Off;
    }
  }
  if (auto* v = get("max_events")) cfg.max_events = static_cast<int>(to_number(*v, "max_events"));
  try {
    cfg.validate();
  } catch (const ConfigurationError& e) {
    throw UsageError("method '" + spec.label + "': " + e.what());
  }
  return cfg;
}

void RunConfig::validate() const {
  if (!(duration > 0.0)) throw UsageError("duration must be positive");
  if (methods.empty()) throw UsageError("at least one method is required");
  if (decimate < 1) throw UsageError("decimate must be at least 1");
  if (h && !(*h > 0.0)) throw UsageError("h must be positive");
  if (!(blowup_factor > 0.0)) throw UsageError("blowup_factor must be positive");
}

Tolerances apply_tolerance_overrides(const std::map<std::string, double>& overrides) {
  Tolerances tol;
  for (const auto& [key, value] : overrides) {
    if (key == "eps_active") {
      tol.eps_active = value;
    } else if (key == "eps_tangent") {
      tol.eps_tangent = value;
    } else if (key == "eps_solver") {
      tol.eps_solver = value;
    } else {
      throw UsageError("unknown tolerance '" + key + "'");
    }
  }
  try {
    tol.validate();
  } catch (const ConfigurationError& e) {
    throw UsageError(e.what());
  }
  return tol;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string section;
  MethodSpec* current_method = nullptr;
  auto fail = [&](const std::string& msg) {
    throw UsageError("config line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      current_method = nullptr;
      if (section.rfind("method", 0) == 0) {
        const std::string name = trim(section.substr(6));
        if (name.empty()) fail("method section needs a name");
        try {
          cfg.methods.push_back(parse_method(name));
        } catch (const UsageError& e) {
          fail(e.what());
        }
        current_method = &cfg.methods.back();
      } else if (section != "set" && section != "tol") {
        fail("unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (current_method) {
        set_option(*current_method, key, value);
      } else if (section == "set") {
        cfg.scenario.overrides[key] = to_number(value, key);
      } else if (section == "tol") {
        cfg.tolerance_overrides[key] = to_number(value, key);
        apply_tolerance_overrides({{key, cfg.tolerance_overrides[key]}});
      } else if (key == "scenario") {
        cfg.scenario.name = parse_scenario_name(value);
      } else if (key == "h") {
        cfg.h = to_number(value, key);
      } else if (key == "duration") {
        cfg.duration = to_number(value, key);
      } else if (key == "methods" || key == "method") {
        for (const auto& tok : split(value, ',')) {
          if (!trim(tok).empty()) cfg.methods.push_back(parse_method(tok));
        }
      } else if (key == "out") {
        cfg.out_dir = value;
      } else if (key == "decimate") {
        cfg.decimate = static_cast<int>(to_number(value, key));
      } else if (key == "seed") {
        cfg.seed = static_cast<unsigned long long>(to_number(value, key));
      } else if (key == "blowup_factor") {
        cfg.blowup_factor = to_number(value, key);
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const ConfigurationError& e) {
      fail(e.what());
    } catch (const UsageError& e) {
      const std::string msg = e.what();
      if (msg.rfind("config line", 0) == 0) throw;
      fail(msg);
    }
  }
  return cfg;
}

}  // namespace gvi

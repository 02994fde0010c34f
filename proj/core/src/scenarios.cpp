#include "gvi/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gvi {
namespace {

using Params = std::map<std::string, double>;

Vec block(const Vec& q, int i, int d) { return q.segment(static_cast<Eigen::Index>(i) * d, d); }

// Distance-type constraint sign * (‖q_i − q_j‖ − offset) between two particle blocks.
ScalarConstraint pair_distance(std::string name, int i, int j, int d, double offset, double sign) {
  ScalarConstraint c;
  c.name = std::move(name);
  c.value = [=](const Vec& q) { return sign * ((block(q, i, d) - block(q, j, d)).norm() - offset); };
  c.gradient = [=](const Vec& q) {
    const Vec u = block(q, i, d) - block(q, j, d);
    Vec g = Vec::Zero(q.size());
    g.segment(static_cast<Eigen::Index>(i) * d, d) = sign * u / u.norm();
    g.segment(static_cast<Eigen::Index>(j) * d, d) = -sign * u / u.norm();
    return g;
  };
  return c;
}

// sign * (‖q_i − anchor‖ − offset).
ScalarConstraint anchor_distance(std::string name, int i, int d, Vec anchor, double offset,
                                 double sign) {
  ScalarConstraint c;
  c.name = std::move(name);
  c.value = [=](const Vec& q) { return sign * ((block(q, i, d) - anchor).norm() - offset); };
  c.gradient = [=](const Vec& q) {
    const Vec u = block(q, i, d) - anchor;
    Vec g = Vec::Zero(q.size());
    g.segment(static_cast<Eigen::Index>(i) * d, d) = sign * u / u.norm();
    return g;
  };
  return c;
}

// Adds a radial pair term with derivative phi1 and second derivative phi2 of
// φ(r) into gradient and Hessian accumulators.
void add_pair_hessian(Mat& h, int i, int j, int d, const Vec& u, double r, double phi1,
                      double phi2) {
  const Vec e = u / r;
  const Mat local = phi2 * e * e.transpose() +
                    (phi1 / r) * (Mat::Identity(d, d) - e * e.transpose());
  const Eigen::Index a = static_cast<Eigen::Index>(i) * d;
  const Eigen::Index b = static_cast<Eigen::Index>(j) * d;
  h.block(a, a, d, d) += local;
  h.block(b, b, d, d) += local;
  h.block(a, b, d, d) -= local;
  h.block(b, a, d, d) -= local;
}

IntegratorConfig recommended(Method method, QuadratureRule rule, double h) {
  IntegratorConfig cfg;
  cfg.method = method;
  cfg.quadrature = Quadrature(rule, h);
  return cfg;
}

Scenario particle1d(const Params& p) {
  const double m = p.at("mass");
  const double grav = p.at("gravity");
  SystemDefinition def;
  def.name = "particle1d";
  def.mass = Mat::Constant(1, 1, m);
  def.potential = [=](const Vec& q) { return m * grav * q[0]; };
  def.potential_gradient = [=](const Vec&) { return Vec::Constant(1, m * grav); };
  def.potential_hessian = [](const Vec&) { return Mat::Zero(1, 1); };
  def.inequalities.push_back({"ground", [](const Vec& q) { return q[0]; },
                              [](const Vec&) { return Vec::Ones(1); }});
  PhaseState s{Vec::Constant(1, p.at("q0")), Vec::Constant(1, p.at("p0")), 0.0};
  return {MechanicalSystem(std::move(def)), s,
          recommended(Method::GVI, QuadratureRule::Verlet, p.at("h"))};
}

Scenario pogo(const Params& p) {
  const double m = p.at("mass");
  const double grav = p.at("gravity");
  const double k = p.at("stiffness");
  const double l = p.at("rest_length");
  SystemDefinition def;
  def.name = "pogo";
  def.mass = m * Mat::Identity(2, 2);
  def.potential = [=](const Vec& q) {
    const double stretch = q[0] - q[1] - l;
    return m * grav * (q[0] + q[1]) + 0.5 * k * stretch * stretch;
  };
  def.potential_gradient = [=](const Vec& q) {
    const double f = k * (q[0] - q[1] - l);
    return Vec((Vec(2) << m * grav + f, m * grav - f).finished());
  };
  def.potential_hessian = [=](const Vec&) {
    return Mat((Mat(2, 2) << k, -k, -k, k).finished());
  };
  def.inequalities.push_back({"ground", [](const Vec& q) { return q[1]; },
                              [](const Vec&) { return Vec((Vec(2) << 0.0, 1.0).finished()); }});
  const double bottom = p.at("drop_height");
  PhaseState s{(Vec(2) << bottom + l, bottom).finished(), Vec::Zero(2), 0.0};
  return {MechanicalSystem(std::move(def)), s,
          recommended(Method::ExtendedReflection, QuadratureRule::Verlet, p.at("h"))};
}

Scenario spring_sphere(const Params& p, bool mixed) {
  const double radius = p.at("radius");
  const double a = p.at("strength");
  const double l = p.at("spring_length");
  const double k = p.at("spring_stiffness");
  SystemDefinition def;
  def.name = mixed ? "spring-sphere-mixed" : "spring-sphere";
  def.particle_dim = 2;
  def.mass = Mat::Identity(4, 4);
  def.potential = [=](const Vec& q) {
    const double d = (block(q, 0, 2) - block(q, 1, 2)).norm() - l;
    return a / block(q, 0, 2).squaredNorm() + a / block(q, 1, 2).squaredNorm() + 0.5 * k * d * d;
  };
  def.potential_gradient = [=](const Vec& q) {
    Vec g(4);
    for (int i = 0; i < 2; ++i) {
      const Vec qi = block(q, i, 2);
      const double s = qi.squaredNorm();
      g.segment(2 * i, 2) = -2.0 * a * qi / (s * s);
    }
    const Vec u = block(q, 0, 2) - block(q, 1, 2);
    const double d = u.norm();
    const Vec f = k * (d - l) * u / d;
    g.segment(0, 2) += f;
    g.segment(2, 2) -= f;
    return g;
  };
  def.potential_hessian = [=](const Vec& q) {
    Mat h = Mat::Zero(4, 4);
    for (int i = 0; i < 2; ++i) {
      const Vec qi = block(q, i, 2);
      const double s = qi.squaredNorm();
      h.block(2 * i, 2 * i, 2, 2) =
          -2.0 * a * Mat::Identity(2, 2) / (s * s) + 8.0 * a * qi * qi.transpose() / (s * s * s);
    }
    const Vec u = block(q, 0, 2) - block(q, 1, 2);
    const double d = u.norm();
    add_pair_hessian(h, 0, 1, 2, u, d, k * (d - l), k);
    return h;
  };
  for (int i = 0; i < 2; ++i) {
    def.inequalities.push_back(
        anchor_distance("sphere" + std::to_string(i), i, 2, Vec::Zero(2), radius, -1.0));
  }
  Vec q(4);
  q << p.at("q1x"), p.at("q1y"), p.at("q2x"), p.at("q2y");
  Vec mom(4);
  mom << p.at("p1x"), p.at("p1y"), p.at("p2x"), p.at("p2y");
  return {MechanicalSystem(std::move(def)), {q, mom, 0.0},
          recommended(Method::GVI, QuadratureRule::Midpoint, p.at("h"))};
}

Scenario oscillator(const Params& p) {
  SystemDefinition def;
  def.name = "oscillator";
  def.particle_dim = 2;
  def.mass = p.at("mass") * Mat::Identity(4, 4);
  def.potential = [](const Vec& q) {
    double v = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double s = block(q, i, 2).squaredNorm();
      v += s * (s - 1.0) * (s - 1.0);
    }
    return v;
  };
  def.potential_gradient = [](const Vec& q) {
    Vec g(4);
    for (int i = 0; i < 2; ++i) {
      const Vec qi = block(q, i, 2);
      const double s = qi.squaredNorm();
      g.segment(2 * i, 2) = 2.0 * (3.0 * s * s - 4.0 * s + 1.0) * qi;
    }
    return g;
  };
  def.potential_hessian = [](const Vec& q) {
    Mat h = Mat::Zero(4, 4);
    for (int i = 0; i < 2; ++i) {
      const Vec qi = block(q, i, 2);
      const double s = qi.squaredNorm();
      h.block(2 * i, 2 * i, 2, 2) = 2.0 * (3.0 * s * s - 4.0 * s + 1.0) * Mat::Identity(2, 2) +
                                    4.0 * (6.0 * s - 4.0) * qi * qi.transpose();
    }
    return h;
  };
  def.inequalities.push_back(pair_distance("contact", 0, 1, 2, 2.0 * p.at("radius"), 1.0));
  const double y = p.at("separation");
  const double v = p.at("speed");
  PhaseState s{(Vec(4) << 0.0, -y, 0.0, y).finished(), (Vec(4) << v, 0.0, -v, 0.0).finished(),
               0.0};
  return {MechanicalSystem(std::move(def)), s,
          recommended(Method::GVI, QuadratureRule::Midpoint, p.at("h"))};
}

Scenario cradle(const Params& p) {
  const int n = static_cast<int>(p.at("count"));
  const int pulled = static_cast<int>(p.at("pulled"));
  if (n < 2 || pulled < 0 || pulled > n) throw ConfigurationError("cradle: invalid count/pulled");
  const double m = p.at("mass");
  const double grav = p.at("gravity");
  const double len = p.at("length");
  const double r = p.at("radius");
  const double theta = p.at("angle");
  SystemDefinition def;
  def.name = "cradle";
  def.particle_dim = 2;
  def.mass = m * Mat::Identity(2 * n, 2 * n);
  def.potential = [=](const Vec& q) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += m * grav * q[2 * i + 1];
    return v;
  };
  def.potential_gradient = [=](const Vec& q) {
    Vec g = Vec::Zero(q.size());
    for (int i = 0; i < n; ++i) g[2 * i + 1] = m * grav;
    return g;
  };
  def.potential_hessian = [=](const Vec&) { return Mat::Zero(2 * n, 2 * n); };
  std::vector<Vec> anchors;
  for (int i = 0; i < n; ++i) {
    anchors.push_back((Vec(2) << 2.0 * r * i, 0.0).finished());
    def.equalities.push_back(
        anchor_distance("rod" + std::to_string(i), i, 2, anchors.back(), len, 1.0));
  }
  for (int i = 0; i + 1 < n; ++i) {
    def.inequalities.push_back(
        pair_distance("contact" + std::to_string(i), i, i + 1, 2, 2.0 * r, 1.0));
  }
  Vec q(2 * n);
  for (int i = 0; i < n; ++i) {
    const double a = i < pulled ? theta : 0.0;
    q.segment(2 * i, 2) = anchors[static_cast<std::size_t>(i)] +
                          len * (Vec(2) << std::sin(a), -std::cos(a)).finished();
  }
  return {MechanicalSystem(std::move(def)), {q, Vec::Zero(2 * n), 0.0},
          recommended(Method::GVI, QuadratureRule::Midpoint, p.at("h"))};
}

Scenario lennard_jones(const Params& p) {
  const int n = static_cast<int>(p.at("count"));
  if (n < 2) throw ConfigurationError("lj: need at least two particles");
  const double sigma = p.at("sigma");
  const double eps = p.at("epsilon");
  const double rod = p.at("rod_length");
  const double r = p.at("radius");
  const double container = p.at("container_radius");
  constexpr int d = 3;

  // Ordered-pair sum: each unordered pair contributes twice.
  auto phi = [=](double x) {
    const double s6 = std::pow(sigma / x, 6);
    return 8.0 * eps * (s6 * s6 - s6);
  };
  auto phi1 = [=](double x) {
    const double s6 = std::pow(sigma / x, 6);
    return 8.0 * eps * (-12.0 * s6 * s6 + 6.0 * s6) / x;
  };
  auto phi2 = [=](double x) {
    const double s6 = std::pow(sigma / x, 6);
    return 8.0 * eps * (156.0 * s6 * s6 - 42.0 * s6) / (x * x);
  };

  SystemDefinition def;
  def.name = "lj";
  def.particle_dim = d;
  def.mass = p.at("mass") * Mat::Identity(d * n, d * n);
  def.potential = [=](const Vec& q) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) v += phi((block(q, i, d) - block(q, j, d)).norm());
    }
    return v;
  };
  def.potential_gradient = [=](const Vec& q) {
    Vec g = Vec::Zero(q.size());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Vec u = block(q, i, d) - block(q, j, d);
        const double x = u.norm();
        const Vec f = phi1(x) * u / x;
        g.segment(d * i, d) += f;
        g.segment(d * j, d) -= f;
      }
    }
    return g;
  };
  def.potential_hessian = [=](const Vec& q) {
    Mat h = Mat::Zero(q.size(), q.size());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Vec u = block(q, i, d) - block(q, j, d);
        const double x = u.norm();
        add_pair_hessian(h, i, j, d, u, x, phi1(x), phi2(x));
      }
    }
    return h;
  };
  for (int i = 0; i + 1 < n; ++i) {
    def.equalities.push_back(pair_distance("rod" + std::to_string(i), i, i + 1, d, rod, 1.0));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      def.inequalities.push_back(pair_distance(
          "overlap" + std::to_string(i) + "_" + std::to_string(j), i, j, d, 2.0 * r, 1.0));
    }
  }
  for (int i = 0; i < n; ++i) {
    def.inequalities.push_back(anchor_distance("container" + std::to_string(i), i, d,
                                               Vec::Zero(d), container - r, -1.0));
  }

  Vec q = Vec::Zero(d * n);
  for (int i = 0; i < n; ++i) q[d * i] = rod * (i - 0.5 * (n - 1));
  std::mt19937 rng(static_cast<std::mt19937::result_type>(p.at("seed")));
  std::normal_distribution<double> normal(0.0, p.at("velocity_scale"));
  Vec mom = Vec::Zero(d * n);
  for (int i = 0; i < n; ++i) {
    mom[d * i + 1] = normal(rng);
    mom[d * i + 2] = normal(rng);
  }
  // Remove net drift so the chain stays near the container center.
  for (int c = 1; c < d; ++c) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += mom[d * i + c];
    mean /= n;
    for (int i = 0; i < n; ++i) mom[d * i + c] -= mean;
  }
  mom *= p.at("mass");
  return {MechanicalSystem(std::move(def)), {q, mom, 0.0},
          recommended(Method::GVI, QuadratureRule::Verlet, p.at("h"))};
}

}  // namespace

const char* to_string(ScenarioName name) {
  switch (name) {
    case ScenarioName::Particle1D: return "particle1d";
    case ScenarioName::PogoStick: return "pogo";
    case ScenarioName::SpringSphere: return "spring-sphere";
    case ScenarioName::SpringSphereMixed: return "spring-sphere-mixed";
    case ScenarioName::NonlinearOscillator: return "oscillator";
    case ScenarioName::NewtonsCradle: return "cradle";
    case ScenarioName::LennardJonesChain: return "lj";
  }
  return "unknown";
}

std::vector<ScenarioName> all_scenarios() {
  return {ScenarioName::Particle1D,          ScenarioName::PogoStick,
          ScenarioName::SpringSphere,        ScenarioName::SpringSphereMixed,
          ScenarioName::NonlinearOscillator, ScenarioName::NewtonsCradle,
          ScenarioName::LennardJonesChain};
}

ScenarioName parse_scenario_name(const std::string& text) {
  for (ScenarioName n : all_scenarios()) {
    if (text == to_string(n)) return n;
  }
  throw ConfigurationError("unknown scenario '" + text + "'");
}

std::map<std::string, double> scenario_defaults(ScenarioName name) {
  switch (name) {
    case ScenarioName::Particle1D:
      return {{"mass", 1.0}, {"gravity", 9.8}, {"q0", 1.0}, {"p0", 0.0}, {"h", 1e-2}};
    case ScenarioName::PogoStick:
      return {{"mass", 1.0},        {"gravity", 9.8},    {"stiffness", 10.0},
              {"rest_length", 5.0}, {"drop_height", 1.0}, {"h", 0.1}};
    case ScenarioName::SpringSphere:
    case ScenarioName::SpringSphereMixed:
      return {{"radius", 5.0},
              {"strength", 25.0},
              {"spring_length", 2.0 * std::numbers::sqrt2},
              {"spring_stiffness", 1.0},
              {"q1x", 4.0},
              {"q1y", name == ScenarioName::SpringSphereMixed ? -1.0 : -3.0},
              {"q2x", 3.0},
              {"q2y", -4.0},
              {"p1x", 0.6},
              {"p1y", 0.8},
              {"p2x", 0.8},
              {"p2y", 0.6},
              {"h", 0.5}};
    case ScenarioName::NonlinearOscillator:
      return {{"mass", 1.0}, {"radius", 1.0}, {"separation", 1.4}, {"speed", 1.0}, {"h", 0.1}};
    case ScenarioName::NewtonsCradle:
      return {{"count", 5.0},   {"pulled", 2.0},  {"mass", 1.0},
              {"gravity", 9.8}, {"length", 1.0},  {"radius", 0.25},
              {"angle", -std::numbers::pi / 5.0}, {"h", 1e-2}};
    case ScenarioName::LennardJonesChain:
      return {{"count", 6.0},          {"mass", 1.0},          {"sigma", 0.6},
              {"epsilon", 1.0},        {"rod_length", 1.0},    {"radius", 0.3},
              {"container_radius", 5.0}, {"velocity_scale", 0.5}, {"seed", 42.0},
              {"h", 1e-2}};
  }
  return {};
}

Scenario build_scenario(const ScenarioSpec& spec) {
  Params params = scenario_defaults(spec.name);
  for (const auto& [key, value] : spec.overrides) {
    auto it = params.find(key);
    if (it == params.end()) {
      throw ConfigurationError("scenario " + std::string(to_string(spec.name)) +
                               " has no parameter '" + key + "'");
    }
    it->second = value;
  }
  switch (spec.name) {
    case ScenarioName::Particle1D: return particle1d(params);
    case ScenarioName::PogoStick: return pogo(params);
    case ScenarioName::SpringSphere: return spring_sphere(params, false);
    case ScenarioName::SpringSphereMixed: return spring_sphere(params, true);
    case ScenarioName::NonlinearOscillator: return oscillator(params);
    case ScenarioName::NewtonsCradle: return cradle(params);
    case ScenarioName::LennardJonesChain: return lennard_jones(params);
  }
  throw ConfigurationError("unknown scenario");
}

}  // namespace gvi

#include "gvi/integrators.hpp"

#include <algorithm>
#include <cmath>

#include "gvi/complementarity.hpp"
#include "gvi/solvers.hpp"

namespace gvi {

const char* to_string(Method method) {
  switch (method) {
    case Method::GVI: return "gvi";
    case Method::DSI: return "dsi";
    case Method::DirectMidpoint: return "direct-midpoint";
    case Method::Newmark: return "newmark";
    case Method::CollisionIntegrator: return "collision";
    case Method::ExtendedReflection: return "extended-reflection";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  tolerances.validate();
  if (!(beta >= 0.0 && beta <= 0.5)) throw ConfigurationError("Newmark beta must lie in [0, 1/2]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigurationError("Newmark gamma must lie in [0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigurationError("direct midpoint alpha must lie in (0, 1]");
  if (max_events < 1) throw ConfigurationError("max_events must be positive");
  if (energy.kind() == EnergyFunction::Kind::VerletNumericalH && !(energy.step() > 0.0)) {
    throw ConfigurationError("numerical energy needs a positive step");
  }
}

StepResult variational_step(const MechanicalSystem& sys, const Quadrature& quad,
                            const PhaseState& s, const Tolerances& tol) {
  StepResult out;
  const Vec x = forward_predictor(sys, quad, s.q, s.p, tol);
  out.state = {x, d2(quad, sys, s.q, x), s.t + quad.step()};
  return out;
}

namespace {

// Same step with the momentum written in force form. It agrees with d2 at
// the solution but avoids the cancellation in (x − q)/h on the very short
// sub-steps the collision integrator takes.
PhaseState free_substep(const MechanicalSystem& sys, const Quadrature& quad, const PhaseState& s,
                        const Tolerances& tol) {
  const Vec x = forward_predictor(sys, quad, s.q, s.p, tol);
  const double h = quad.step();
  const Vec force = quad.rule() == QuadratureRule::Midpoint
                        ? Vec(h * sys.potential_gradient(0.5 * (s.q + x)))
                        : Vec(0.5 * h * (sys.potential_gradient(s.q) + sys.potential_gradient(x)));
  return {x, s.p - force, s.t + h};
}

}  // namespace

namespace {

// The numerical-Hamiltonian law has no separating solution for slow approaches
// under a strongly coupled potential; those impacts use the continuous law.
ReflectionResult reflect_for_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                                  const Vec& q, const Vec& p, const IndexSet& K) {
  if (cfg.energy.kind() != EnergyFunction::Kind::VerletNumericalH) {
    return reflect(cfg.reflection, sys, q, p, K, cfg.energy, cfg.tolerances);
  }
  try {
    return reflect(cfg.reflection, sys, q, p, K, cfg.energy, cfg.tolerances);
  } catch (const NonterminationError&) {
  } catch (const InfeasibleError&) {
  }
  return reflect(cfg.reflection, sys, q, p, K, EnergyFunction::continuous(), cfg.tolerances);
}

StepResult reflect_and_solve(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                             const PhaseState& s, bool use_smooth_set) {
  const Tolerances& tol = cfg.tolerances;
  const Quadrature& quad = cfg.quadrature;
  StepResult out;

  const Vec q_pred = forward_predictor(sys, quad, s.q, s.p, tol);
  out.extended_set = extended_active_set(sys, s.q, q_pred, tol);
  const Mat normals = projected_active_gradient(sys, s.q, IndexSet::range(sys.num_inequalities()));

  // The predictor ignores equalities and the impulses of this step, so a
  // reflection can still leave a contact that the actual position update
  // crosses (a chain of touching bodies, or a rod swinging a bead into a
  // neighbour). Crossed contacts that are approaching join the set and the
  // reflection is redone from the incoming momentum.
  Vec p_plus = s.p;
  bool reflected = false;
  ComplementaritySolution pos;
  for (int pass = 0;; ++pass) {
    p_plus = s.p;
    reflected = false;
    out.impulse = Vec();
    if (!out.extended_set.empty()) {
      const ReflectionResult r = reflect_for_step(sys, cfg, s.q, s.p, out.extended_set);
      p_plus = r.p_plus;
      out.impulse = r.lambda;
      reflected = r.lambda.size() > 0 && r.lambda.maxCoeff() > 0.0;
    }
    out.smooth_set = use_smooth_set ? smooth_set(sys, s.q, p_plus, tol) : IndexSet();
    pos = position_update_solve(sys, quad, s.q, p_plus, out.smooth_set, tol,
                                forward_predictor(sys, quad, s.q, p_plus, tol));
    if (pass == sys.num_inequalities()) break;
    const Vec g = inequality_values(sys, pos.q_next);
    const Vec rate = normals.transpose() * sys.apply_mass_inverse(p_plus);
    IndexSet grown = out.extended_set;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (g[i] < -tol.eps_active && rate[i] < -tol.eps_tangent) {
        grown = grown.with(static_cast<int>(i));
      }
    }
    if (grown == out.extended_set) break;
    out.extended_set = grown;
  }

  // Contacts still crossed after that (grazing approaches under a driving
  // force) are held by the position update but left out of the cotangency
  // projection; the next step reflects them. Holding one contact can push a
  // neighbour through, so the held set grows until nothing else is violated.
  IndexSet held = out.smooth_set;
  auto hold_violated = [&held, &sys, &tol](const Vec& x) {
    const Vec g = inequality_values(sys, x);
    bool grew = false;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const int idx = static_cast<int>(i);
      if (g[i] < -tol.eps_active && !held.contains(idx)) {
        held = held.with(idx);
        grew = true;
      }
    }
    return grew;
  };
  for (int pass = 0; pass < sys.num_inequalities() && hold_violated(pos.q_next); ++pass) {
    pos = position_update_solve(sys, quad, s.q, p_plus, held, tol, pos.q_next);
  }
  const MomentumUpdate mom =
      momentum_update_solve(sys, quad, s.q, pos.q_next, out.smooth_set, tol);
  out.force = pos.lambda;
  out.state = {pos.q_next, mom.p_next, s.t + quad.step()};
  if (reflected) {
    out.event = StepEvent::Reflection;
  } else if (!out.smooth_set.empty()) {
    out.event = StepEvent::SmoothContact;
  }
  return out;
}

StepResult gvi_pipeline(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                        const PhaseState& s, bool use_smooth_set) {
  if (cfg.linearization != Linearization::Off && sys.num_inequalities() > 0) {
    const Vec y = cfg.linearization == Linearization::StepStart
                      ? s.q
                      : forward_predictor(sys, cfg.quadrature, s.q, s.p, cfg.tolerances);
    return reflect_and_solve(linearize_inequalities(sys, y), cfg, s, use_smooth_set);
  }
  return reflect_and_solve(sys, cfg, s, use_smooth_set);
}

// Constraint values/gradients of `sys` evaluated at y(x) = (1−a)q + a·x,
// differentiated with respect to x.
void attach_constraints_at(ComplementarityProblem& prob, const MechanicalSystem& sys,
                           const Vec& q, double a) {
  auto at = [q, a](const Vec& x) { return Vec((1.0 - a) * q + a * x); };
  prob.num_inequalities = sys.num_inequalities();
  prob.num_equalities = sys.num_equalities();
  prob.inequality_values = [&sys, at](const Vec& x) { return inequality_values(sys, at(x)); };
  prob.inequality_gradients = [&sys, at, a](const Vec& x) {
    return Mat(a * constraint_gradient_matrix(sys, at(x), IndexSet::range(sys.num_inequalities()),
                                              ConstraintKind::Inequality));
  };
  prob.equality_values = [&sys, at](const Vec& x) { return equality_values(sys, at(x)); };
  prob.equality_gradients = [&sys, at, a](const Vec& x) {
    return Mat(a * equality_gradient_matrix(sys, at(x)));
  };
}

IndexSet violated_at(const MechanicalSystem& sys, const Vec& x, double threshold) {
  std::vector<int> out;
  const Vec g = inequality_values(sys, x);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] < -threshold) out.push_back(static_cast<int>(i));
  }
  return IndexSet(std::move(out));
}

}  // namespace

StepResult gvi_step(const MechanicalSystem& sys, const IntegratorConfig& cfg, const PhaseState& s) {
  return gvi_pipeline(sys, cfg, s, true);
}

StepResult extended_reflection_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                                    const PhaseState& s) {
  return gvi_pipeline(sys, cfg, s, false);
}

StepResult dsi_step(const MechanicalSystem& sys, const IntegratorConfig& cfg, const PhaseState& s) {
  const Tolerances& tol = cfg.tolerances;
  const Quadrature& quad = cfg.quadrature;
  const Vec v = sys.apply_mass_inverse(s.p);
  for (int i : active_set(sys, s.q, tol)) {
    const double rate = sys.inequality(i).gradient(s.q).dot(v);
    if (std::abs(rate) > tol.eps_tangent) {
      throw ContractViolation("DSI needs tangential momentum on active constraint " +
                              sys.inequality(i).name + " (rate " + std::to_string(rate) +
                              "); use the GVI step");
    }
  }
  StepResult out;
  const IndexSet all = IndexSet::range(sys.num_inequalities());
  const ComplementaritySolution pos = position_update_solve(sys, quad, s.q, s.p, all, tol);
  const MomentumUpdate mom = momentum_update_solve(sys, quad, s.q, pos.q_next, all, tol);
  out.smooth_set = pos.working_set;
  out.force = pos.lambda;
  out.state = {pos.q_next, mom.p_next, s.t + quad.step()};
  if (!pos.working_set.empty()) out.event = StepEvent::SmoothContact;
  return out;
}

StepResult direct_midpoint_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                                const PhaseState& s, double alpha) {
  const Tolerances& tol = cfg.tolerances;
  const double h = cfg.step();
  const Mat& m = sys.mass();
  const Vec target = m * s.q + h * s.p;

  ComplementarityProblem prob;
  prob.n = sys.dim();
  prob.residual = [&](const Vec& x) {
    return Vec(m * x - target + 0.5 * h * h * sys.potential_gradient(0.5 * (s.q + x)));
  };
  prob.residual_jacobian = [&](const Vec& x) {
    return Mat(m + 0.25 * h * h * sys.potential_hessian_or_fd(0.5 * (s.q + x)));
  };
  attach_constraints_at(prob, sys, s.q, alpha);
  // Minimization form: the multiplier term enters with the negative
  // constraint gradient.
  prob.inequality_forces = [&](const Vec& x) { return Mat(-prob.inequality_gradients(x)); };
  prob.equality_forces = [&](const Vec& x) { return Mat(-prob.equality_gradients(x)); };
  prob.forces_depend_on_x = true;

  const Vec x0 = forward_predictor(sys, cfg.quadrature.rule() == QuadratureRule::Midpoint
                                            ? cfg.quadrature
                                            : Quadrature(QuadratureRule::Midpoint, h),
                                   s.q, s.p, tol);
  const Vec y0 = (1.0 - alpha) * s.q + alpha * x0;
  ComplementarityOptions opt;
  opt.tol = tol.eps_solver;
  opt.feasibility = tol.eps_active;
  const ComplementarityResult r =
      solve_complementarity(prob, x0, violated_at(sys, y0, tol.eps_active), opt);

  StepResult out;
  out.force = r.lambda;
  out.smooth_set = r.working_set;
  out.state = {r.x, (2.0 / h) * (m * (r.x - s.q)) - s.p, s.t + h};
  if (!r.working_set.empty()) out.event = StepEvent::SmoothContact;
  return out;
}

StepResult newmark_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                        const PhaseState& s, double beta, double gamma, bool imex,
                        StepCarry& carry) {
  const Tolerances& tol = cfg.tolerances;
  const double h = cfg.step();
  const Mat& m = sys.mass();
  const Vec v = sys.apply_mass_inverse(s.p);
  const Vec grad0 = sys.potential_gradient(s.q);
  Vec prev_force = Vec::Zero(sys.dim());
  if (!imex && carry.constraint_force.size() == sys.dim()) prev_force = carry.constraint_force;

  // Weight of the unknown constraint force in the position equation.
  const double c_pos = imex ? 0.5 * h * h : beta * h * h;
  const double c_vel = imex ? h : gamma * h;
  const Vec explicit_pos = (1.0 - 2.0 * beta) * (grad0 - prev_force);
  const Vec explicit_vel = (1.0 - gamma) * (grad0 - prev_force);

  ComplementarityProblem prob;
  prob.n = sys.dim();
  prob.residual = [&](const Vec& x) {
    return Vec(m * (x - s.q - h * v) +
               0.5 * h * h * (explicit_pos + 2.0 * beta * sys.potential_gradient(x)));
  };
  prob.residual_jacobian = [&](const Vec& x) {
    return Mat(m + beta * h * h * sys.potential_hessian_or_fd(x));
  };
  attach_constraints_at(prob, sys, s.q, 1.0);
  prob.inequality_forces = [&](const Vec& x) { return Mat(-c_pos * prob.inequality_gradients(x)); };
  prob.equality_forces = [&](const Vec& x) { return Mat(-c_pos * prob.equality_gradients(x)); };
  prob.forces_depend_on_x = true;

  const Vec x_free = s.q + h * v - 0.5 * h * h * sys.apply_mass_inverse(Vec(explicit_pos + 2.0 * beta * grad0));
  Vec x;
  Vec force = Vec::Zero(sys.dim());
  StepResult out;
  if (c_pos == 0.0) {
    // Explicit position update: constraints cannot act on q_next.
    x = x_free;
    if (!violated_at(sys, x, tol.eps_active).empty() ||
        (sys.num_equalities() > 0 &&
         equality_values(sys, x).lpNorm<Eigen::Infinity>() > tol.eps_active)) {
      throw SolverError("explicit Newmark (beta = 0) step violates a constraint; use imex");
    }
  } else {
    ComplementarityOptions opt;
    opt.tol = tol.eps_solver;
    opt.feasibility = tol.eps_active;
    const ComplementarityResult r =
        solve_complementarity(prob, x_free, violated_at(sys, x_free, tol.eps_active), opt);
    x = r.x;
    const Mat g = constraint_gradient_matrix(sys, x, IndexSet::range(sys.num_inequalities()),
                                             ConstraintKind::Inequality);
    force = g * r.lambda + equality_gradient_matrix(sys, x) * r.nu;
    out.force = r.lambda;
    out.smooth_set = r.working_set;
    if (!r.working_set.empty()) out.event = StepEvent::SmoothContact;
  }
  const Vec grad1 = sys.potential_gradient(x);
  const Vec v1 = v - h * sys.apply_mass_inverse(Vec(explicit_vel + gamma * grad1)) +
                 (c_vel / h) * h * sys.apply_mass_inverse(force);
  carry.constraint_force = force;
  out.state = {x, m * v1, s.t + h};
  return out;
}

StepResult collision_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                          const PhaseState& s) {
  const Tolerances& tol = cfg.tolerances;
  const double h = cfg.step();
  StepResult out;
  PhaseState cur = s;
  double remaining = 1.0;

  for (;;) {
    const Quadrature sub = cfg.quadrature.with_step(remaining * h);
    const PhaseState trial = free_substep(sys, sub, cur, tol);
    const IndexSet crossing = violated_at(sys, trial.q, tol.eps_active);
    if (crossing.empty()) {
      out.state = trial;
      out.state.t = s.t + h;
      break;
    }
    if (out.events >= cfg.max_events) {
      throw StepFailure("collision integrator: more than " + std::to_string(cfg.max_events) +
                            " impacts in one step",
                        s.t);
    }
    // Impact times come from linear interpolation between the sub-step
    // endpoints; the sub-step is then re-taken to that fraction. Contacts
    // already on or through the boundary impact at the start.
    const Vec g_cur = inequality_values(sys, cur.q);
    std::vector<double> tau(crossing.size(), 0.0);
    for (std::size_t k = 0; k < crossing.size(); ++k) {
      const int i = crossing[k];
      if (g_cur[i] > tol.eps_active) tau[k] = time_of_impact(sys, cur.q, trial.q, i, tol);
    }
    const double lo = *std::min_element(tau.begin(), tau.end());
    std::vector<int> joint;
    for (std::size_t k = 0; k < crossing.size(); ++k) {
      if (tau[k] <= lo + tol.eps_active) joint.push_back(crossing[k]);
    }
    PhaseState impact = cur;
    if (lo > 0.0) {
      impact = free_substep(sys, cfg.quadrature.with_step(lo * remaining * h), cur, tol);
    }
    const ReflectionResult r = reflect_for_step(sys, cfg, impact.q, impact.p, IndexSet(joint));
    if (lo == 0.0 && !(r.lambda.maxCoeff() > 0.0)) {
      // Already separating at the start yet crossed by the end: the sub-step
      // map cannot do better, so the crossing step is accepted.
      out.state = trial;
      out.state.t = s.t + h;
      break;
    }
    cur = {impact.q, r.p_plus, impact.t};
    remaining *= (1.0 - lo);
    ++out.events;
    if (remaining <= 0.0) {
      out.state = cur;
      out.state.t = s.t + h;
      break;
    }
  }
  if (out.events > 0) out.event = StepEvent::Reflection;
  return out;
}

MechanicalSystem linearize_inequalities(const MechanicalSystem& sys, const Vec& q) {
  SystemDefinition def = sys.definition();
  for (auto& c : def.inequalities) {
    const double g0 = c.value(q);
    const Vec grad = c.gradient(q);
    c.value = [g0, grad, q](const Vec& x) { return g0 + grad.dot(x - q); };
    c.gradient = [grad](const Vec&) { return grad; };
  }
  return MechanicalSystem(std::move(def));
}

Stepper::Stepper(const MechanicalSystem& sys, IntegratorConfig cfg)
    : sys_(sys), cfg_(std::move(cfg)) {
  cfg_.validate();
}

StepResult Stepper::step(const PhaseState& s) {
  switch (cfg_.method) {
    case Method::GVI: return gvi_step(sys_, cfg_, s);
    case Method::DSI: return dsi_step(sys_, cfg_, s);
    case Method::DirectMidpoint: return direct_midpoint_step(sys_, cfg_, s, cfg_.alpha);
    case Method::Newmark:
      return newmark_step(sys_, cfg_, s, cfg_.beta, cfg_.gamma, cfg_.imex, carry_);
    case Method::CollisionIntegrator: return collision_step(sys_, cfg_, s);
    case Method::ExtendedReflection: return extended_reflection_step(sys_, cfg_, s);
  }
  throw ConfigurationError("unknown method");
}

}  // namespace gvi

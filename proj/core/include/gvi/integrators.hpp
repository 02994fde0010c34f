#pragma once

#include <string>

#include "gvi/cones.hpp"
#include "gvi/energy.hpp"
#include "gvi/quadrature.hpp"
#include "gvi/reflection.hpp"
#include "gvi/system.hpp"

namespace gvi {

enum class Method {
  GVI,                  ///< reflection + smooth-set variational step
  DSI,                  ///< discrete-smooth integrator (no reflections)
  DirectMidpoint,       ///< implicit midpoint with the constraint force substituted
  Newmark,              ///< Newmark family with substituted constraint force
  CollisionIntegrator,  ///< sub-steps to impacts, reflects, finishes the step
  ExtendedReflection,   ///< GVI with the smooth set forced empty
};

const char* to_string(Method method);

/// Per-step event classification written into traces (integer codes are
/// part of the CSV contract).
/// Where the linearized-constraint ablation freezes each inequality.
enum class Linearization { Off, StepStart, Predictor };

enum class StepEvent { None = 0, Reflection = 1, SmoothContact = 2, StepFailure = 3 };

struct IntegratorConfig {
  Method method = Method::GVI;
  Quadrature quadrature{QuadratureRule::Verlet, 1e-2};
  ReflectionModel reflection = ReflectionModel::Generalized;
  EnergyFunction energy = EnergyFunction::continuous();
  Tolerances tolerances;

  double alpha = 1.0;   ///< direct midpoint: constraint evaluated at (1−α)q + αx
  double beta = 0.25;   ///< Newmark
  double gamma = 0.5;   ///< Newmark
  bool imex = false;    ///< Newmark: constraint force fully implicit
  /// GVI ablation: each step replaces every inequality by its linearization
  /// at the step's starting configuration or at its forward predictor.
  Linearization linearization = Linearization::Off;
  /// Collision integrator: cap on impacts resolved inside one step.
  int max_events = 64;

  double step() const noexcept { return quadrature.step(); }
  /// Throws ConfigurationError for out-of-range parameters.
  void validate() const;
};

struct StepResult {
  PhaseState state;
  StepEvent event = StepEvent::None;
  /// Reflection impulses over the extended active set.
  Vec impulse;
  /// Smooth contact multipliers over the smooth set (position update).
  Vec force;
  IndexSet extended_set;
  IndexSet smooth_set;
  /// Impacts resolved (collision integrator).
  int events = 0;
};

/// State a method carries between steps. Only non-IMEX Newmark uses it
/// (the constraint force at q^t).
struct StepCarry {
  Vec constraint_force;
};

/// Unconstrained variational step: forward predictor + D2 L_d.
StepResult variational_step(const MechanicalSystem& sys, const Quadrature& quad,
                            const PhaseState& s, const Tolerances& tol);

/// One step of the generalized variational integrator:
/// predictor → extended active set → reflection → smooth set →
/// position update → momentum update.
StepResult gvi_step(const MechanicalSystem& sys, const IntegratorConfig& cfg, const PhaseState& s);

/// Discrete-smooth step over the constraints active at q. Throws
/// ContractViolation when an active constraint has non-tangential momentum
/// (that state needs a reflection; use gvi_step).
StepResult dsi_step(const MechanicalSystem& sys, const IntegratorConfig& cfg, const PhaseState& s);

/// Direct-substitution implicit midpoint, constraints imposed at
/// (1−α)q + αq_next; p_next = (2/h)M(q_next − q) − p.
StepResult direct_midpoint_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                                const PhaseState& s, double alpha);

/// Direct-substitution Newmark (β, γ), optionally IMEX (constraint force
/// fully implicit at q_next). Momenta are stored as p = M·q̇.
StepResult newmark_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                        const PhaseState& s, double beta, double gamma, bool imex,
                        StepCarry& carry);

/// Collision integrator: unconstrained sub-steps interrupted at each impact,
/// reflection with cfg.energy, then the remaining fraction of the step.
/// Throws StepFailure after cfg.max_events impacts in one step.
StepResult collision_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                          const PhaseState& s);

/// GVI pipeline with the smooth set forced empty: constraints handled by
/// reflections only.
StepResult extended_reflection_step(const MechanicalSystem& sys, const IntegratorConfig& cfg,
                                    const PhaseState& s);

/// Copy of `sys` whose inequalities are replaced by their linearization at y:
/// g_i(y) + ∇g_i(y)ᵀ(x − y).
MechanicalSystem linearize_inequalities(const MechanicalSystem& sys, const Vec& y);

/// Dispatches on cfg.method and owns the inter-step carry.
class Stepper {
 public:
  Stepper(const MechanicalSystem& sys, IntegratorConfig cfg);

  StepResult step(const PhaseState& s);
  const IntegratorConfig& config() const noexcept { return cfg_; }

 private:
  const MechanicalSystem& sys_;
  IntegratorConfig cfg_;
  StepCarry carry_;
};

}  // namespace gvi

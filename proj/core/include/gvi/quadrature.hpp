#pragma once

#include "gvi/system.hpp"

namespace gvi {

enum class QuadratureRule { Midpoint, Verlet };

const char* to_string(QuadratureRule rule);

/// Discrete Lagrangian rule with its time step.
class Quadrature {
 public:
  /// Throws ConfigurationError unless h > 0 and finite.
  Quadrature(QuadratureRule rule, double h);

  QuadratureRule rule() const noexcept { return rule_; }
  double step() const noexcept { return h_; }

  /// Same rule, different step (collision sub-steps).
  Quadrature with_step(double h) const { return Quadrature(rule_, h); }

 private:
  QuadratureRule rule_;
  double h_;
};

/// L_d(q0, q1) for L = ½ q̇ᵀM q̇ − V(q).
///   Midpoint: h·L((q0+q1)/2, (q1−q0)/h)
///   Verlet:   (h/2)·[L(q0, (q1−q0)/h) + L(q1, (q1−q0)/h)]
double discrete_lagrangian(const Quadrature& quad, const MechanicalSystem& sys, const Vec& q0,
                           const Vec& q1);

/// ∂L_d/∂q0.
Vec d1(const Quadrature& quad, const MechanicalSystem& sys, const Vec& q0, const Vec& q1);

/// ∂L_d/∂q1.
Vec d2(const Quadrature& quad, const MechanicalSystem& sys, const Vec& q0, const Vec& q1);

/// ∂(D1 L_d)/∂q1, the Jacobian of the position-update residual in its unknown.
/// Verlet: −M/h (constant). Midpoint: −M/h − (h/4)∇²V((q0+q1)/2).
Mat d1_jacobian(const Quadrature& quad, const MechanicalSystem& sys, const Vec& q0, const Vec& q1);

/// Second-order numerical Hamiltonian of Störmer–Verlet:
///   H + h²·[ (1/12)·pᵀM⁻¹∇²V M⁻¹p − (1/24)·∇VᵀM⁻¹∇V ].
/// Throws CapabilityError if the system has no potential Hessian.
double modified_hamiltonian_verlet(const MechanicalSystem& sys, const PhaseState& s, double h);

}  // namespace gvi

#pragma once

#include <functional>

#include "gvi/cones.hpp"
#include "gvi/index_set.hpp"
#include "gvi/quadrature.hpp"
#include "gvi/system.hpp"

namespace gvi {

struct ComplementaritySolution {
  Vec q_next;
  Vec lambda;  ///< one entry per member of S, >= 0
  Vec nu;      ///< equality multipliers
  double residual = 0.0;
  IndexSet working_set;  ///< members of S held at g = 0
};

/// Position update of the generalized variational step: find x with
///   D1 L_d(q, x) + p_plus + N_S(q)λ + F(q)ν = 0,
///   0 <= λ ⊥ g_S(x) >= 0,   f(x) = 0.
/// Constraint gradients are taken at q, constraint values at x.
///
/// `guess` seeds Newton; the forward predictor is used when it is empty.
ComplementaritySolution position_update_solve(const MechanicalSystem& sys, const Quadrature& quad,
                                              const Vec& q, const Vec& p_plus, const IndexSet& S,
                                              const Tolerances& tol, const Vec& guess = Vec());

struct MomentumUpdate {
  Vec p_next;
  Vec mu;  ///< multipliers of the members of S active at q_new
  Vec xi;  ///< equality multipliers
  IndexSet cotangent_set;  ///< members of S active at q_new
  bool rank_deficient = false;
};

/// p_next = D2 L_d(q_old, q_new) + N(q_new)μ + F(q_new)ξ with
/// [N F]ᵀM⁻¹p_next = 0, solved through the Gram system. N holds the members
/// of S that are still active at q_new.
MomentumUpdate momentum_update_solve(const MechanicalSystem& sys, const Quadrature& quad,
                                     const Vec& q_old, const Vec& q_new, const IndexSet& S,
                                     const Tolerances& tol);

/// Unconstrained forward predictor: x with D1 L_d(q, x) + p = 0.
/// Closed form for Verlet, damped Newton for Midpoint.
/// Throws SolverError if Newton fails.
Vec forward_predictor(const MechanicalSystem& sys, const Quadrature& quad, const Vec& q,
                      const Vec& p, const Tolerances& tol);

/// Root τ ∈ [0, 1] of g along a path, by bisection (<= max_iter halvings).
/// Requires g(0) > 0 > g(1). Returns once |g(τ)| <= eps or the bracket
/// collapses; the returned τ is the feasible end of the final bracket when
/// |g| could not be brought under eps.
double locate_event(const std::function<double(double)>& g_of_tau, double eps,
                    int max_iter = 200);

/// Time of impact of inequality `index` along q(τ) = (1−τ)q0 + τq1.
/// Throws ContractViolation unless g(q0) > 0 and g(q1) < 0.
double time_of_impact(const MechanicalSystem& sys, const Vec& q0, const Vec& q1, int index,
                      const Tolerances& tol);

}  // namespace gvi

#pragma once

#include "gvi/cones.hpp"
#include "gvi/energy.hpp"
#include "gvi/index_set.hpp"
#include "gvi/system.hpp"

namespace gvi {

enum class ReflectionModel { Generalized, Moreau };

const char* to_string(ReflectionModel model);

struct ReflectionResult {
  Vec p_plus;
  /// Accumulated impulse magnitude per column of the gradient matrix (>= 0).
  Vec lambda;
  /// Number of projection passes that changed the momentum.
  int iterations = 0;
};

/// Iterated energy-preserving projections over the violated subset until
/// no column of G has Gᵀ M⁻¹ p < −eps_tangent. Columns of G are impulse
/// directions; A is the quadratic form of the conserved energy, which
/// differs from M⁻¹ for the numerical Hamiltonian.
///
/// Throws NonterminationError after `max_passes` passes (0 → 100·k), or as
/// soon as a pass cannot move a violated column.
ReflectionResult generalized_reflection(const Mat& G, const Mat& mass_inverse, const Mat& metric,
                                        const Vec& p, const Tolerances& tol, int max_passes = 0);

/// Single energy-preserving projection over every column of G (Moreau's
/// elastic law). Throws InfeasibleError when the result is not kinematically
/// feasible for all columns.
ReflectionResult moreau_reflection(const Mat& G, const Mat& mass_inverse, const Mat& metric,
                                   const Vec& p, const Tolerances& tol);

/// Impulse directions for a reflection over K at q: inequality gradients,
/// projected onto the equality cotangent space when equalities exist.
Mat reflection_directions(const MechanicalSystem& sys, const Vec& q, const IndexSet& K);

/// System-level operator over the constraint subset K with energy E.
/// An empty K returns p unchanged.
ReflectionResult generalized_reflection(const MechanicalSystem& sys, const Vec& q, const Vec& p,
                                        const IndexSet& K, const EnergyFunction& energy,
                                        const Tolerances& tol);

ReflectionResult moreau_reflection(const MechanicalSystem& sys, const Vec& q, const Vec& p,
                                   const IndexSet& K, const EnergyFunction& energy,
                                   const Tolerances& tol);

ReflectionResult reflect(ReflectionModel model, const MechanicalSystem& sys, const Vec& q,
                         const Vec& p, const IndexSet& K, const EnergyFunction& energy,
                         const Tolerances& tol);

}  // namespace gvi

#pragma once

#include "gvi/index_set.hpp"
#include "gvi/system.hpp"

namespace gvi {

/// Floating-point thresholds standing in for the exact tests g = 0 and
/// ∇gᵀM⁻¹p = 0. Absolute, since all shipped scenarios are O(1)-scaled.
struct Tolerances {
  double eps_active = 1e-9;
  double eps_tangent = 1e-9;
  double eps_solver = 1e-10;

  /// Throws ConfigurationError unless every entry is strictly positive.
  void validate() const;
};

/// {i : g_i(q) <= eps_active}. Violated constraints (g < −eps_active) are
/// included; see violated_set() to report them.
IndexSet active_set(const MechanicalSystem& sys, const Vec& q, const Tolerances& tol);

/// {i : g_i(q) < −eps_active}.
IndexSet violated_set(const MechanicalSystem& sys, const Vec& q, const Tolerances& tol);

/// {i : g_i(q_pred) <= 0} ∪ active_set(q).
IndexSet extended_active_set(const MechanicalSystem& sys, const Vec& q, const Vec& q_pred,
                             const Tolerances& tol);

/// {i : |g_i(q)| <= eps_active and |∇g_i(q)ᵀM⁻¹p| <= eps_tangent}.
IndexSet smooth_set(const MechanicalSystem& sys, const Vec& q, const Vec& p, const Tolerances& tol);

/// True iff ∇g_i(q)ᵀv >= −eps_tangent for all i in active_set(q).
bool in_tangent_cone(const MechanicalSystem& sys, const Vec& q, const Vec& v, const Tolerances& tol);

/// P(q) = I − F (FᵀM⁻¹F)⁺ FᵀM⁻¹, the projector annihilating momentum
/// components normal to the equality manifold. Identity without equalities.
Mat equality_projector(const MechanicalSystem& sys, const Vec& q);

/// Inequality gradients of `subset` projected onto the equality cotangent
/// space: columns c with FᵀM⁻¹c = 0. Equal to constraint_gradient_matrix
/// when there are no equalities.
Mat projected_active_gradient(const MechanicalSystem& sys, const Vec& q, const IndexSet& subset);

/// Members of `subset` that are active at q (|g| <= eps_active or violated).
IndexSet active_subset(const MechanicalSystem& sys, const Vec& q, const IndexSet& subset,
                       const Tolerances& tol);

/// Moore–Penrose pseudoinverse with singular values below cutoff·σ_max dropped.
Mat pseudo_inverse(const Mat& a, double relative_cutoff = 1e-12);

}  // namespace gvi

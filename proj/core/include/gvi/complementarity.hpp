#pragma once

#include <functional>

#include "gvi/index_set.hpp"
#include "gvi/system.hpp"

namespace gvi {

/// Mixed complementarity problem shared by the position solves:
///
///   r(x) + A(x)λ + B(x)ν = 0,
///   0 <= λ ⊥ c(x) >= 0,
///   e(x) = 0.
///
/// Force columns A, B are evaluated wherever the caller decides (at a fixed
/// configuration for the variational updates, at x for direct methods).
struct ComplementarityProblem {
  Eigen::Index n = 0;
  int num_inequalities = 0;
  int num_equalities = 0;

  std::function<Vec(const Vec&)> residual;
  std::function<Mat(const Vec&)> residual_jacobian;

  std::function<Mat(const Vec&)> inequality_forces;  ///< n × num_inequalities
  std::function<Mat(const Vec&)> equality_forces;    ///< n × num_equalities
  /// When true, ∂(Aλ + Bν)/∂x is added to the Newton matrix by central differences.
  bool forces_depend_on_x = false;

  std::function<Vec(const Vec&)> inequality_values;
  std::function<Mat(const Vec&)> inequality_gradients;  ///< columns ∇c_i(x)
  std::function<Vec(const Vec&)> equality_values;
  std::function<Mat(const Vec&)> equality_gradients;  ///< columns ∇e_j(x)
};

struct ComplementarityOptions {
  double tol = 1e-10;          ///< Newton residual target (∞-norm)
  double feasibility = 1e-9;   ///< allowed c_i(x) < 0 outside the working set
  int max_newton = 100;
  int max_halvings = 30;
  /// Working sets larger than this are not exhaustively enumerated.
  int max_enumeration = 16;
};

struct ComplementarityResult {
  Vec x;
  Vec lambda;  ///< one entry per inequality, zero outside the working set
  Vec nu;
  double residual = 0.0;
  IndexSet working_set;
  int newton_iterations = 0;
  int active_set_passes = 0;
};

/// Active-set outer loop over working sets W ⊆ {0..m−1}, each solved as an
/// equality-constrained damped Newton system with c_W(x) = 0 imposed.
/// Pivots the most negative multiplier out or the most violated constraint
/// in; on a revisited set, falls back to enumerating every subset (by size,
/// then lexicographically).
///
/// Throws InfeasibleError when no working set is consistent and SolverError
/// when Newton fails for every candidate.
ComplementarityResult solve_complementarity(const ComplementarityProblem& problem, const Vec& x0,
                                            const IndexSet& initial_working_set,
                                            const ComplementarityOptions& options);

}  // namespace gvi

#pragma once

#include "gvi/system.hpp"

namespace gvi {

struct NnlsResult {
  Vec x;
  int iterations = 0;
  /// max over KKT conditions of the normal-equation form (dual feasibility,
  /// complementarity, stationarity on the passive set).
  double kkt_residual = 0.0;
};

/// Lawson–Hanson active-set solve of
///   min ½ xᵀQx − bᵀx   subject to x >= 0,
/// the normal-equation form of a non-negative least-squares problem with
/// Gram matrix Q (symmetric positive semidefinite).
///
/// Throws SolverError on stagnation (iteration cap 3·k + 30).
NnlsResult solve_nnls_normal(const Mat& Q, const Vec& b, double tol = 1e-12);

/// Energy-preserving impulse magnitudes for the violated gradient columns Gv:
/// solves GvᵀA Gv λ = −2 GvᵀA p, λ >= 0 in the NNLS sense, where A is the
/// quadratic form of the conserved energy (M⁻¹ for the continuous H).
Vec energy_projection_nnls(const Mat& Gv, const Mat& metric, const Vec& p);

}  // namespace gvi

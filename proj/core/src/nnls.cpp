#include "gvi/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gvi {
namespace {

// Least-squares solve of Q_PP z = b_P; tolerates a singular passive block.
Vec solve_passive(const Mat& Q, const Vec& b, const std::vector<int>& passive) {
  const auto k = static_cast<Eigen::Index>(passive.size());
  Mat qpp(k, k);
  Vec bp(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    bp[r] = b[passive[r]];
    for (Eigen::Index c = 0; c < k; ++c) qpp(r, c) = Q(passive[r], passive[c]);
  }
  return qpp.completeOrthogonalDecomposition().solve(bp);
}

double kkt_residual(const Mat& Q, const Vec& b, const Vec& x) {
  const Vec w = b - Q * x;
  double r = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    r = std::max(r, -x[i]);
    if (x[i] > 0.0) {
      r = std::max(r, std::abs(w[i]));
    } else {
      r = std::max(r, w[i]);
    }
  }
  return r;
}

}  // namespace

NnlsResult solve_nnls_normal(const Mat& Q, const Vec& b, double tol) {
  const Eigen::Index k = b.size();
  NnlsResult result;
  result.x = Vec::Zero(k);
  if (k == 0) return result;

  const double scale = std::max({1.0, b.cwiseAbs().maxCoeff(), Q.cwiseAbs().maxCoeff()});
  const double dual_tol = tol * scale;
  std::vector<bool> passive(static_cast<std::size_t>(k), false);
  std::vector<bool> banned(static_cast<std::size_t>(k), false);
  Vec& x = result.x;
  const int max_outer = 3 * static_cast<int>(k) + 30;

  for (int outer = 0;; ++outer) {
    const Vec w = b - Q * x;
    Eigen::Index enter = -1;
    double best = dual_tol;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!passive[i] && !banned[i] && w[i] > best) {
        best = w[i];
        enter = i;
      }
    }
    if (enter < 0) break;
    if (outer >= max_outer) {
      throw SolverError("NNLS stagnated after " + std::to_string(outer) + " iterations");
    }
    ++result.iterations;
    passive[enter] = true;

    for (int inner = 0; inner <= 3 * static_cast<int>(k) + 3; ++inner) {
      std::vector<int> pset;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (passive[i]) pset.push_back(static_cast<int>(i));
      }
      const Vec z_p = solve_passive(Q, b, pset);
      Vec z = Vec::Zero(k);
      for (std::size_t r = 0; r < pset.size(); ++r) z[pset[r]] = z_p[static_cast<Eigen::Index>(r)];

      bool all_positive = true;
      for (int i : pset) all_positive = all_positive && z[i] > 0.0;
      if (all_positive) {
        x = z;
        break;
      }
      // Step from x toward z until the first passive coordinate hits zero.
      double alpha = 1.0;
      for (int i : pset) {
        if (z[i] <= 0.0) alpha = std::min(alpha, x[i] / (x[i] - z[i]));
      }
      x += alpha * (z - x);
      bool moved = false;
      for (int i : pset) {
        if (x[i] <= 1e-15 * scale) {
          x[i] = 0.0;
          passive[i] = false;
          moved = true;
        }
      }
      if (!moved) break;
      // The entering index was dropped without progress: its column is
      // dependent on the passive set, so it cannot improve the objective.
      if (!passive[enter] && x[enter] == 0.0 && alpha == 0.0) {
        banned[enter] = true;
        break;
      }
    }
  }
  result.kkt_residual = kkt_residual(Q, b, x);
  return result;
}

Vec energy_projection_nnls(const Mat& Gv, const Mat& metric, const Vec& p) {
  const Mat ag = metric * Gv;
  Mat gram = Gv.transpose() * ag;
  gram = 0.5 * (gram + gram.transpose()).eval();
  const Vec rhs = -2.0 * ag.transpose() * p;
  return solve_nnls_normal(gram, rhs).x;
}

}  // namespace gvi

#include "gvi/cones.hpp"

#include <cmath>

namespace gvi {

void Tolerances::validate() const {
  if (!(eps_active > 0.0) || !(eps_tangent > 0.0) || !(eps_solver > 0.0)) {
    throw ConfigurationError("tolerances must be strictly positive");
  }
}

IndexSet active_set(const MechanicalSystem& sys, const Vec& q, const Tolerances& tol) {
  std::vector<int> out;
  for (int i = 0; i < sys.num_inequalities(); ++i) {
    if (sys.inequality(i).value(q) <= tol.eps_active) out.push_back(i);
  }
  return IndexSet(std::move(out));
}

IndexSet violated_set(const MechanicalSystem& sys, const Vec& q, const Tolerances& tol) {
  std::vector<int> out;
  for (int i = 0; i < sys.num_inequalities(); ++i) {
    if (sys.inequality(i).value(q) < -tol.eps_active) out.push_back(i);
  }
  return IndexSet(std::move(out));
}

IndexSet extended_active_set(const MechanicalSystem& sys, const Vec& q, const Vec& q_pred,
                             const Tolerances& tol) {
  std::vector<int> out;
  for (int i = 0; i < sys.num_inequalities(); ++i) {
    const auto& c = sys.inequality(i);
    if (c.value(q_pred) <= 0.0 || c.value(q) <= tol.eps_active) out.push_back(i);
  }
  return IndexSet(std::move(out));
}

IndexSet smooth_set(const MechanicalSystem& sys, const Vec& q, const Vec& p, const Tolerances& tol) {
  const Vec v = sys.apply_mass_inverse(p);
  std::vector<int> out;
  for (int i = 0; i < sys.num_inequalities(); ++i) {
    const auto& c = sys.inequality(i);
    if (std::abs(c.value(q)) <= tol.eps_active && std::abs(c.gradient(q).dot(v)) <= tol.eps_tangent) {
      out.push_back(i);
    }
  }
  return IndexSet(std::move(out));
}

bool in_tangent_cone(const MechanicalSystem& sys, const Vec& q, const Vec& v, const Tolerances& tol) {
  for (int i : active_set(sys, q, tol)) {
    if (sys.inequality(i).gradient(q).dot(v) < -tol.eps_tangent) return false;
  }
  return true;
}

Mat pseudo_inverse(const Mat& a, double relative_cutoff) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sigma = svd.singularValues();
  const double cutoff = relative_cutoff * sigma.maxCoeff();
  Vec inv = Vec::Zero(sigma.size());
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > cutoff) inv[k] = 1.0 / sigma[k];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Mat equality_projector(const MechanicalSystem& sys, const Vec& q) {
  const Eigen::Index n = sys.dim();
  if (sys.num_equalities() == 0) return Mat::Identity(n, n);
  const Mat f = equality_gradient_matrix(sys, q);
  const Mat minv_f = sys.apply_mass_inverse(f);
  const Mat gram = f.transpose() * minv_f;
  return Mat::Identity(n, n) - f * pseudo_inverse(gram) * minv_f.transpose();
}

Mat projected_active_gradient(const MechanicalSystem& sys, const Vec& q, const IndexSet& subset) {
  Mat g = constraint_gradient_matrix(sys, q, subset, ConstraintKind::Inequality);
  if (sys.num_equalities() == 0 || g.cols() == 0) return g;
  return equality_projector(sys, q) * g;
}

IndexSet active_subset(const MechanicalSystem& sys, const Vec& q, const IndexSet& subset,
                       const Tolerances& tol) {
  std::vector<int> out;
  for (int i : subset) {
    if (sys.inequality(i).value(q) <= tol.eps_active) out.push_back(i);
  }
  return IndexSet(std::move(out));
}

}  // namespace gvi

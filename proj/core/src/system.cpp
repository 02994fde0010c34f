#include "gvi/system.hpp"

#include <cmath>
#include <stdexcept>

namespace gvi {

MechanicalSystem::MechanicalSystem(SystemDefinition def) : def_(std::move(def)) {
  const Mat& m = def_.mass;
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ConfigurationError("mass matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigurationError("mass matrix is not symmetric");
  }
  mass_llt_.compute(m);
  if (mass_llt_.info() != Eigen::Success) {
    throw ConfigurationError("mass matrix is not positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw ConfigurationError("mass matrix is not positive definite");
  }
  mass_inverse_ = mass_llt_.solve(Mat::Identity(m.rows(), m.cols()));
  mass_inverse_ = 0.5 * (mass_inverse_ + mass_inverse_.transpose()).eval();

  if (!def_.potential || !def_.potential_gradient) {
    throw ConfigurationError("potential and its gradient are required");
  }
  for (const auto* list : {&def_.inequalities, &def_.equalities}) {
    for (const auto& c : *list) {
      if (!c.value || !c.gradient) {
        throw ConfigurationError("constraint '" + c.name + "' is missing value or gradient");
      }
    }
  }
  if (def_.particle_dim < 1 || m.rows() % def_.particle_dim != 0) {
    throw ConfigurationError("particle dimension must divide the configuration dimension");
  }
}

Mat MechanicalSystem::potential_hessian(const Vec& q) const {
  if (!def_.potential_hessian) {
    throw CapabilityError("system '" + def_.name + "' provides no potential Hessian");
  }
  return def_.potential_hessian(q);
}

Mat MechanicalSystem::potential_hessian_or_fd(const Vec& q) const {
  if (def_.potential_hessian) return def_.potential_hessian(q);
  Mat h = central_difference_jacobian(def_.potential_gradient, q);
  return 0.5 * (h + h.transpose());
}

double kinetic_energy(const MechanicalSystem& sys, const Vec& p) {
  return 0.5 * p.dot(sys.apply_mass_inverse(p));
}

double hamiltonian(const MechanicalSystem& sys, const PhaseState& s) {
  return kinetic_energy(sys, s.p) + sys.potential(s.q);
}

Vec inequality_values(const MechanicalSystem& sys, const Vec& q) {
  Vec g(sys.num_inequalities());
  for (int i = 0; i < sys.num_inequalities(); ++i) g[i] = sys.inequality(i).value(q);
  return g;
}

Vec equality_values(const MechanicalSystem& sys, const Vec& q) {
  Vec f(sys.num_equalities());
  for (int j = 0; j < sys.num_equalities(); ++j) f[j] = sys.equality(j).value(q);
  return f;
}

ConstraintValues constraint_values(const MechanicalSystem& sys, const Vec& q) {
  return {inequality_values(sys, q), equality_values(sys, q)};
}

Mat constraint_gradient_matrix(const MechanicalSystem& sys, const Vec& q, const IndexSet& subset,
                               ConstraintKind kind) {
  const bool ineq = kind == ConstraintKind::Inequality;
  subset.check_bound(ineq ? sys.num_inequalities() : sys.num_equalities());
  Mat g(sys.dim(), static_cast<Eigen::Index>(subset.size()));
  Eigen::Index col = 0;
  for (int k : subset) {
    g.col(col++) = ineq ? sys.inequality(k).gradient(q) : sys.equality(k).gradient(q);
  }
  return g;
}

Mat equality_gradient_matrix(const MechanicalSystem& sys, const Vec& q) {
  Mat f(sys.dim(), sys.num_equalities());
  for (int j = 0; j < sys.num_equalities(); ++j) f.col(j) = sys.equality(j).gradient(q);
  return f;
}

Mat central_difference_jacobian(const std::function<Vec(const Vec&)>& field, const Vec& x,
                                double step) {
  const Eigen::Index n = x.size();
  Mat jac;
  Vec xp = x;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double dk = step * std::max(1.0, std::abs(x[k]));
    xp[k] = x[k] + dk;
    Vec fp = field(xp);
    xp[k] = x[k] - dk;
    Vec fm = field(xp);
    xp[k] = x[k];
    if (k == 0) jac.resize(fp.size(), n);
    jac.col(k) = (fp - fm) / (2.0 * dk);
  }
  return jac;
}

}  // namespace gvi

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gvi/errors.hpp"
#include "gvi/index_set.hpp"

namespace gvi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A scalar constraint g(q) (>= 0 or == 0) with its analytic gradient.
struct ScalarConstraint {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

/// Configuration, momentum and time of a discrete trajectory point.
struct PhaseState {
  Vec q;
  Vec p;
  double t = 0.0;

  bool finite() const { return q.allFinite() && p.allFinite() && std::isfinite(t); }
};

enum class ConstraintKind { Inequality, Equality };

/// Everything needed to build a MechanicalSystem.
struct SystemDefinition {
  std::string name;
  Mat mass;
  std::function<double(const Vec&)> potential;
  std::function<Vec(const Vec&)> potential_gradient;
  std::function<Mat(const Vec&)> potential_hessian;  // may be empty
  std::vector<ScalarConstraint> inequalities;
  std::vector<ScalarConstraint> equalities;
  /// Spatial dimension of one particle block; drives momentum diagnostics.
  int particle_dim = 1;
};

/// Separable mechanical system H = ½ pᵀM⁻¹p + V(q) with inequality
/// constraints g(q) >= 0 and equality constraints f(q) = 0.
///
/// Immutable after construction; all queries are pure and thread-safe.
class MechanicalSystem {
 public:
  /// Validates the definition. Throws ConfigurationError when the mass
  /// matrix is not symmetric positive definite or callbacks are missing.
  explicit MechanicalSystem(SystemDefinition def);

  const std::string& name() const noexcept { return def_.name; }
  Eigen::Index dim() const noexcept { return def_.mass.rows(); }
  int particle_dim() const noexcept { return def_.particle_dim; }

  const Mat& mass() const noexcept { return def_.mass; }
  const Mat& mass_inverse() const noexcept { return mass_inverse_; }
  Vec apply_mass_inverse(const Vec& v) const { return mass_llt_.solve(v); }
  Mat apply_mass_inverse(const Mat& m) const { return mass_llt_.solve(m); }

  double potential(const Vec& q) const { return def_.potential(q); }
  Vec potential_gradient(const Vec& q) const { return def_.potential_gradient(q); }
  bool has_potential_hessian() const noexcept { return static_cast<bool>(def_.potential_hessian); }
  /// Throws CapabilityError when no analytic Hessian was supplied.
  Mat potential_hessian(const Vec& q) const;
  /// Analytic Hessian when present, central differences of the gradient otherwise.
  Mat potential_hessian_or_fd(const Vec& q) const;

  int num_inequalities() const noexcept { return static_cast<int>(def_.inequalities.size()); }
  int num_equalities() const noexcept { return static_cast<int>(def_.equalities.size()); }
  const ScalarConstraint& inequality(int i) const { return def_.inequalities.at(i); }
  const ScalarConstraint& equality(int j) const { return def_.equalities.at(j); }
  const std::vector<ScalarConstraint>& inequalities() const noexcept { return def_.inequalities; }
  const std::vector<ScalarConstraint>& equalities() const noexcept { return def_.equalities; }

  const SystemDefinition& definition() const noexcept { return def_; }

 private:
  SystemDefinition def_;
  Eigen::LLT<Mat> mass_llt_;
  Mat mass_inverse_;
};

double kinetic_energy(const MechanicalSystem& sys, const Vec& p);

/// H(q, p) = ½ pᵀM⁻¹p + V(q).
double hamiltonian(const MechanicalSystem& sys, const PhaseState& s);

struct ConstraintValues {
  Vec g;  ///< inequality values, one per registered inequality
  Vec f;  ///< equality values
};

ConstraintValues constraint_values(const MechanicalSystem& sys, const Vec& q);
Vec inequality_values(const MechanicalSystem& sys, const Vec& q);
Vec equality_values(const MechanicalSystem& sys, const Vec& q);

/// Columns are ∇g_k(q) (or ∇f_k(q)) in subset order; n×0 for an empty subset.
/// Throws std::out_of_range for an index outside the chosen kind.
Mat constraint_gradient_matrix(const MechanicalSystem& sys, const Vec& q,
                               const IndexSet& subset, ConstraintKind kind);

/// All equality gradients F(q), n×(number of equalities).
Mat equality_gradient_matrix(const MechanicalSystem& sys, const Vec& q);

/// Central-difference Jacobian of a vector field; used where analytic
/// second derivatives are not part of the system definition.
Mat central_difference_jacobian(const std::function<Vec(const Vec&)>& field, const Vec& x,
                                double step = 1e-6);

}  // namespace gvi

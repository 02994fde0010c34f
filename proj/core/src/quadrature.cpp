#include "gvi/quadrature.hpp"

#include <cmath>

namespace gvi {

const char* to_string(QuadratureRule rule) {
  return rule == QuadratureRule::Midpoint ? "midpoint" : "verlet";
}

Quadrature::Quadrature(QuadratureRule rule, double h) : rule_(rule), h_(h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ConfigurationError("time step must be positive and finite");
  }
}

namespace {

double lagrangian(const MechanicalSystem& sys, const Vec& q, const Vec& v) {
  return 0.5 * v.dot(sys.mass() * v) - sys.potential(q);
}

}  // namespace

double discrete_lagrangian(const Quadrature& quad, const MechanicalSystem& sys, const Vec& q0,
                           const Vec& q1) {
  const double h = quad.step();
  const Vec v = (q1 - q0) / h;
  if (quad.rule() == QuadratureRule::Midpoint) {
    return h * lagrangian(sys, 0.5 * (q0 + q1), v);
  }
  return 0.5 * h * (lagrangian(sys, q0, v) + lagrangian(sys, q1, v));
}

Vec d1(const Quadrature& quad, const MechanicalSystem& sys, const Vec& q0, const Vec& q1) {
  const double h = quad.step();
  const Vec kinetic = sys.mass() * (q1 - q0) / h;
  if (quad.rule() == QuadratureRule::Midpoint) {
    return -kinetic - 0.5 * h * sys.potential_gradient(0.5 * (q0 + q1));
  }
  return -kinetic - 0.5 * h * sys.potential_gradient(q0);
}

Vec d2(const Quadrature& quad, const MechanicalSystem& sys, const Vec& q0, const Vec& q1) {
  const double h = quad.step();
  const Vec kinetic = sys.mass() * (q1 - q0) / h;
  if (quad.rule() == QuadratureRule::Midpoint) {
    return kinetic - 0.5 * h * sys.potential_gradient(0.5 * (q0 + q1));
  }
  return kinetic - 0.5 * h * sys.potential_gradient(q1);
}

Mat d1_jacobian(const Quadrature& quad, const MechanicalSystem& sys, const Vec& q0, const Vec& q1) {
  const double h = quad.step();
  Mat jac = -sys.mass() / h;
  if (quad.rule() == QuadratureRule::Midpoint) {
    jac -= 0.25 * h * sys.potential_hessian_or_fd(0.5 * (q0 + q1));
  }
  return jac;
}

double modified_hamiltonian_verlet(const MechanicalSystem& sys, const PhaseState& s, double h) {
  const Mat hess = sys.potential_hessian(s.q);
  const Vec v = sys.apply_mass_inverse(s.p);
  const Vec grad = sys.potential_gradient(s.q);
  const double correction =
      v.dot(hess * v) / 12.0 - grad.dot(sys.apply_mass_inverse(grad)) / 24.0;
  return hamiltonian(sys, s) + h * h * correction;
}

}  // namespace gvi

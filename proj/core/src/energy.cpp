#include "gvi/energy.hpp"

#include <cmath>

#include "gvi/quadrature.hpp"

namespace gvi {

EnergyFunction EnergyFunction::verlet_numerical(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ConfigurationError("numerical Hamiltonian needs a positive step");
  }
  return EnergyFunction(Kind::VerletNumericalH, h);
}

double EnergyFunction::value(const MechanicalSystem& sys, const Vec& q, const Vec& p) const {
  const PhaseState s{q, p, 0.0};
  if (kind_ == Kind::ContinuousH) return hamiltonian(sys, s);
  return modified_hamiltonian_verlet(sys, s, h_);
}

Mat EnergyFunction::metric(const MechanicalSystem& sys, const Vec& q) const {
  if (kind_ == Kind::ContinuousH) return sys.mass_inverse();
  const Mat& minv = sys.mass_inverse();
  Mat a = minv + (h_ * h_ / 6.0) * minv * sys.potential_hessian(q) * minv;
  return 0.5 * (a + a.transpose());
}

const char* to_string(EnergyFunction::Kind kind) {
  return kind == EnergyFunction::Kind::ContinuousH ? "continuous" : "numerical";
}

}  // namespace gvi

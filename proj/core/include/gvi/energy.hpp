#pragma once

#include "gvi/system.hpp"

namespace gvi {

/// Energy conserved by reflections. Both variants are quadratic in p:
/// E(q, p) = ½ pᵀA(q)p + c(q), where A is returned by metric().
class EnergyFunction {
 public:
  enum class Kind { ContinuousH, VerletNumericalH };

  /// The separable Hamiltonian; A = M⁻¹.
  static EnergyFunction continuous() { return EnergyFunction(Kind::ContinuousH, 0.0); }
  /// Störmer–Verlet second-order numerical Hamiltonian at step h;
  /// A = M⁻¹ + (h²/6)·M⁻¹∇²V M⁻¹.
  static EnergyFunction verlet_numerical(double h);

  Kind kind() const noexcept { return kind_; }
  double step() const noexcept { return h_; }

  double value(const MechanicalSystem& sys, const Vec& q, const Vec& p) const;
  /// ∂²E/∂p², symmetric.
  Mat metric(const MechanicalSystem& sys, const Vec& q) const;

  friend bool operator==(const EnergyFunction&, const EnergyFunction&) = default;

 private:
  EnergyFunction(Kind kind, double h) : kind_(kind), h_(h) {}

  Kind kind_;
  double h_;
};

const char* to_string(EnergyFunction::Kind kind);

}  // namespace gvi

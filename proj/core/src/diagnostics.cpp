#include "gvi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gvi/quadrature.hpp"

namespace gvi {

double DiagnosticRecord::angular_momentum_scalar() const {
  if (angular_momentum.size() == 1) return angular_momentum[0];
  if (angular_momentum.size() == 3) return angular_momentum.norm();
  return 0.0;
}

Vec linear_momentum(const MechanicalSystem& sys, const Vec& p) {
  const int d = sys.particle_dim();
  Vec total = Vec::Zero(d);
  for (Eigen::Index i = 0; i + d <= p.size(); i += d) total += p.segment(i, d);
  return total;
}

Vec angular_momentum(const MechanicalSystem& sys, const Vec& q, const Vec& p) {
  const int d = sys.particle_dim();
  if (d == 2) {
    double j = 0.0;
    for (Eigen::Index i = 0; i < q.size(); i += 2) j += q[i] * p[i + 1] - q[i + 1] * p[i];
    return Vec::Constant(1, j);
  }
  if (d == 3) {
    Eigen::Vector3d j = Eigen::Vector3d::Zero();
    for (Eigen::Index i = 0; i < q.size(); i += 3) {
      j += Eigen::Vector3d(q.segment<3>(i)).cross(Eigen::Vector3d(p.segment<3>(i)));
    }
    return j;
  }
  return Vec();
}

DiagnosticRecord record(const MechanicalSystem& sys, const PhaseState& s, StepEvent event,
                        const Vec& lambda, std::optional<double> verlet_step) {
  DiagnosticRecord r;
  r.t = s.t;
  r.H = hamiltonian(sys, s);
  if (verlet_step && sys.has_potential_hessian()) {
    r.H_modified = modified_hamiltonian_verlet(sys, s, *verlet_step);
  }
  r.linear_momentum = linear_momentum(sys, s.p);
  r.angular_momentum = angular_momentum(sys, s.q, s.p);
  const Vec g = inequality_values(sys, s.q);
  r.g_min = g.size() > 0 ? g.minCoeff() : std::numeric_limits<double>::infinity();
  const Vec f = equality_values(sys, s.q);
  r.f_max_abs = f.size() > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
  r.lambda_active = lambda;
  r.event = event;
  return r;
}

void Trace::push(PhaseState state, DiagnosticRecord rec) {
  if (!states_.empty() && !(state.t > states_.back().t)) {
    throw ContractViolation("trace times must be strictly increasing");
  }
  states_.push_back(std::move(state));
  records_.push_back(std::move(rec));
}

EnvelopeStats envelope_stats(std::span<const double> xs) {
  if (xs.empty()) throw ContractViolation("envelope_stats: empty series");
  EnvelopeStats st;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  for (double x : xs) st.max_drift = std::max(st.max_drift, std::abs(x - xs.front()));
  st.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double spread = *hi - *lo;
  st.relative = st.mean != 0.0;
  st.relative_envelope = st.relative ? spread / std::abs(st.mean) : spread;
  return st;
}

std::vector<double> series(const Trace& trace, Quantity quantity) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& r : trace.records()) {
    switch (quantity) {
      case Quantity::Energy: out.push_back(r.H); break;
      case Quantity::ModifiedEnergy:
        out.push_back(r.H_modified.value_or(std::numeric_limits<double>::quiet_NaN()));
        break;
      case Quantity::AngularMomentum: out.push_back(r.angular_momentum_scalar()); break;
    }
  }
  return out;
}

EnvelopeStats envelope_stats(const Trace& trace, Quantity quantity) {
  const auto xs = series(trace, quantity);
  return envelope_stats(std::span<const double>(xs));
}

}  // namespace gvi

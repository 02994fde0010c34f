#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gvi/integrators.hpp"
#include "gvi/system.hpp"

namespace gvi {

struct DiagnosticRecord {
  double t = 0.0;
  double H = 0.0;
  std::optional<double> H_modified;
  Vec linear_momentum;   ///< Σ p_i over particle blocks
  Vec angular_momentum;  ///< size 1 (planar), 3 (spatial) or 0 (1-D)
  double g_min = 0.0;    ///< most negative inequality value (+inf without inequalities)
  double f_max_abs = 0.0;
  Vec lambda_active;
  StepEvent event = StepEvent::None;

  /// Planar J, or |J| for spatial systems, 0 otherwise.
  double angular_momentum_scalar() const;
};

/// Σ p_i over particle blocks of size sys.particle_dim().
Vec linear_momentum(const MechanicalSystem& sys, const Vec& p);
/// Σ q_i × p_i about the origin.
Vec angular_momentum(const MechanicalSystem& sys, const Vec& q, const Vec& p);

/// Measures a state. `verlet_step` enables the modified Hamiltonian (needs
/// a potential Hessian).
DiagnosticRecord record(const MechanicalSystem& sys, const PhaseState& s, StepEvent event,
                        const Vec& lambda = Vec(), std::optional<double> verlet_step = {});

struct TraceMetadata {
  std::string scenario;
  std::string method;
  double h = 0.0;
  unsigned long long seed = 0;
};

/// Append-only time series of states and their diagnostics.
class Trace {
 public:
  Trace() = default;
  explicit Trace(TraceMetadata meta) : meta_(std::move(meta)) {}

  /// Throws ContractViolation unless t is strictly increasing.
  void push(PhaseState state, DiagnosticRecord rec);

  const TraceMetadata& metadata() const noexcept { return meta_; }
  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }
  const std::vector<PhaseState>& states() const noexcept { return states_; }
  const std::vector<DiagnosticRecord>& records() const noexcept { return records_; }

 private:
  TraceMetadata meta_;
  std::vector<PhaseState> states_;
  std::vector<DiagnosticRecord> records_;
};

enum class Quantity { Energy, ModifiedEnergy, AngularMomentum };

struct EnvelopeStats {
  double max_drift = 0.0;          ///< max |x(t) − x(0)|
  double mean = 0.0;
  double relative_envelope = 0.0;  ///< (max − min)/|mean|, or max − min when !relative
  bool relative = true;
};

/// Throws ContractViolation on an empty series.
EnvelopeStats envelope_stats(std::span<const double> series);
EnvelopeStats envelope_stats(const Trace& trace, Quantity quantity);

std::vector<double> series(const Trace& trace, Quantity quantity);

}  // namespace gvi

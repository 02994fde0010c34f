#include "gvi/reflection.hpp"

#include <cmath>

#include "gvi/nnls.hpp"

namespace gvi {

const char* to_string(ReflectionModel model) {
  return model == ReflectionModel::Generalized ? "generalized" : "moreau";
}

ReflectionResult generalized_reflection(const Mat& G, const Mat& mass_inverse, const Mat& metric,
                                        const Vec& p, const Tolerances& tol, int max_passes) {
  const Eigen::Index k = G.cols();
  ReflectionResult out{p, Vec::Zero(k), 0};
  if (k == 0) return out;
  if (max_passes <= 0) max_passes = 100 * static_cast<int>(k);

  for (int pass = 0; pass <= max_passes; ++pass) {
    const Vec rate = G.transpose() * (mass_inverse * out.p_plus);
    std::vector<Eigen::Index> violated;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (rate[i] < -tol.eps_tangent) violated.push_back(i);
    }
    if (violated.empty()) return out;
    if (pass == max_passes) break;

    Mat gv(G.rows(), static_cast<Eigen::Index>(violated.size()));
    for (std::size_t c = 0; c < violated.size(); ++c) {
      gv.col(static_cast<Eigen::Index>(c)) = G.col(violated[c]);
    }
    const Vec lambda = energy_projection_nnls(gv, metric, out.p_plus);
    if (!(lambda.maxCoeff() > 0.0)) break;
    out.p_plus += gv * lambda;
    for (std::size_t c = 0; c < violated.size(); ++c) {
      out.lambda[violated[c]] += lambda[static_cast<Eigen::Index>(c)];
    }
    ++out.iterations;
  }
  throw NonterminationError("generalized reflection left a constraint violated after " +
                                std::to_string(out.iterations) + " passes",
                            out.p_plus);
}

ReflectionResult moreau_reflection(const Mat& G, const Mat& mass_inverse, const Mat& metric,
                                   const Vec& p, const Tolerances& tol) {
  const Eigen::Index k = G.cols();
  ReflectionResult out{p, Vec::Zero(k), 0};
  if (k == 0) return out;
  const Vec rate = G.transpose() * (mass_inverse * p);
  if (rate.minCoeff() >= -tol.eps_tangent) return out;

  out.lambda = energy_projection_nnls(G, metric, p);
  out.p_plus = p + G * out.lambda;
  out.iterations = 1;
  const Vec after = G.transpose() * (mass_inverse * out.p_plus);
  if (after.minCoeff() < -tol.eps_tangent) {
    throw InfeasibleError("Moreau reflection leaves a constraint violated (rate " +
                          std::to_string(after.minCoeff()) + ")");
  }
  return out;
}

Mat reflection_directions(const MechanicalSystem& sys, const Vec& q, const IndexSet& K) {
  return projected_active_gradient(sys, q, K);
}

ReflectionResult generalized_reflection(const MechanicalSystem& sys, const Vec& q, const Vec& p,
                                        const IndexSet& K, const EnergyFunction& energy,
                                        const Tolerances& tol) {
  if (K.empty()) return {p, Vec(), 0};
  return generalized_reflection(reflection_directions(sys, q, K), sys.mass_inverse(),
                                energy.metric(sys, q), p, tol);
}

ReflectionResult moreau_reflection(const MechanicalSystem& sys, const Vec& q, const Vec& p,
                                   const IndexSet& K, const EnergyFunction& energy,
                                   const Tolerances& tol) {
  if (K.empty()) return {p, Vec(), 0};
  return moreau_reflection(reflection_directions(sys, q, K), sys.mass_inverse(),
                           energy.metric(sys, q), p, tol);
}

ReflectionResult reflect(ReflectionModel model, const MechanicalSystem& sys, const Vec& q,
                         const Vec& p, const IndexSet& K, const EnergyFunction& energy,
                         const Tolerances& tol) {
  return model == ReflectionModel::Generalized
             ? generalized_reflection(sys, q, p, K, energy, tol)
             : moreau_reflection(sys, q, p, K, energy, tol);
}

}  // namespace gvi

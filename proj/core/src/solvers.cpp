#include "gvi/solvers.hpp"

#include <cmath>

#include "gvi/complementarity.hpp"

namespace gvi {

Vec forward_predictor(const MechanicalSystem& sys, const Quadrature& quad, const Vec& q,
                      const Vec& p, const Tolerances& tol) {
  const double h = quad.step();
  if (quad.rule() == QuadratureRule::Verlet) {
    return q + h * sys.apply_mass_inverse(Vec(p - 0.5 * h * sys.potential_gradient(q)));
  }
  // Midpoint: Newton from the free-flight guess, halving on residual increase.
  Vec x = q + h * sys.apply_mass_inverse(p);
  Vec r = d1(quad, sys, q, x) + p;
  double res = r.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < 100; ++it) {
    if (res <= tol.eps_solver) {
      // One extra full step: the convergence is quadratic, so this takes the
      // residual to roundoff and keeps D2-based and force-based momenta equal.
      const Vec polished = x + d1_jacobian(quad, sys, q, x).lu().solve(-r);
      const double pres = (d1(quad, sys, q, polished) + p).lpNorm<Eigen::Infinity>();
      return pres < res ? polished : x;
    }
    const Vec dx = d1_jacobian(quad, sys, q, x).lu().solve(-r);
    double step = 1.0;
    bool improved = false;
    for (int k = 0; k <= 30; ++k) {
      const Vec trial = x + step * dx;
      const Vec tr = d1(quad, sys, q, trial) + p;
      const double tres = tr.lpNorm<Eigen::Infinity>();
      if (std::isfinite(tres) && tres < res) {
        x = trial;
        r = tr;
        res = tres;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      if (res <= 100.0 * tol.eps_solver) return x;
      break;
    }
  }
  if (res <= 100.0 * tol.eps_solver) return x;
  throw SolverError("forward predictor: Newton did not converge (residual " +
                    std::to_string(res) + ")");
}

ComplementaritySolution position_update_solve(const MechanicalSystem& sys, const Quadrature& quad,
                                              const Vec& q, const Vec& p_plus, const IndexSet& S,
                                              const Tolerances& tol, const Vec& guess) {
  S.check_bound(sys.num_inequalities());
  const Vec x0 = guess.size() == 0 ? forward_predictor(sys, quad, q, p_plus, tol) : guess;
  const Mat g_q = constraint_gradient_matrix(sys, q, S, ConstraintKind::Inequality);
  const Mat f_q = equality_gradient_matrix(sys, q);

  ComplementarityProblem prob;
  prob.n = sys.dim();
  prob.num_inequalities = static_cast<int>(S.size());
  prob.num_equalities = sys.num_equalities();
  prob.residual = [&](const Vec& x) { return Vec(d1(quad, sys, q, x) + p_plus); };
  prob.residual_jacobian = [&](const Vec& x) { return d1_jacobian(quad, sys, q, x); };
  prob.inequality_forces = [&](const Vec&) { return g_q; };
  prob.equality_forces = [&](const Vec&) { return f_q; };
  prob.inequality_values = [&](const Vec& x) {
    Vec c(static_cast<Eigen::Index>(S.size()));
    for (std::size_t k = 0; k < S.size(); ++k) {
      c[static_cast<Eigen::Index>(k)] = sys.inequality(S[k]).value(x);
    }
    return c;
  };
  prob.inequality_gradients = [&](const Vec& x) {
    return constraint_gradient_matrix(sys, x, S, ConstraintKind::Inequality);
  };
  prob.equality_values = [&](const Vec& x) { return equality_values(sys, x); };
  prob.equality_gradients = [&](const Vec& x) { return equality_gradient_matrix(sys, x); };

  std::vector<int> initial;
  if (!S.empty()) {
    const Vec c0 = prob.inequality_values(x0);
    for (std::size_t k = 0; k < S.size(); ++k) {
      if (c0[static_cast<Eigen::Index>(k)] < -tol.eps_active) initial.push_back(static_cast<int>(k));
    }
  }

  ComplementarityOptions opt;
  opt.tol = tol.eps_solver;
  opt.feasibility = tol.eps_active;
  const ComplementarityResult r = solve_complementarity(prob, x0, IndexSet(initial), opt);

  ComplementaritySolution out;
  out.q_next = r.x;
  out.lambda = r.lambda;
  out.nu = r.nu;
  out.residual = r.residual;
  std::vector<int> held;
  for (int k : r.working_set) held.push_back(S[static_cast<std::size_t>(k)]);
  out.working_set = IndexSet(held);
  return out;
}

MomentumUpdate momentum_update_solve(const MechanicalSystem& sys, const Quadrature& quad,
                                     const Vec& q_old, const Vec& q_new, const IndexSet& S,
                                     const Tolerances& tol) {
  MomentumUpdate out;
  out.p_next = d2(quad, sys, q_old, q_new);
  out.cotangent_set = active_subset(sys, q_new, S, tol);
  const Mat n_mat = constraint_gradient_matrix(sys, q_new, out.cotangent_set,
                                               ConstraintKind::Inequality);
  const Mat f_mat = equality_gradient_matrix(sys, q_new);
  const Eigen::Index kn = n_mat.cols();
  const Eigen::Index kf = f_mat.cols();
  out.mu = Vec::Zero(kn);
  out.xi = Vec::Zero(kf);
  if (kn + kf == 0) return out;

  Mat c(sys.dim(), kn + kf);
  c << n_mat, f_mat;
  const Mat minv_c = sys.apply_mass_inverse(c);
  const Mat gram = c.transpose() * minv_c;
  const Vec rhs = -minv_c.transpose() * out.p_next;

  Eigen::JacobiSVD<Mat> svd(gram);
  const Vec& sigma = svd.singularValues();
  out.rank_deficient = sigma.minCoeff() <= 1e-12 * sigma.maxCoeff();
  const Vec y = out.rank_deficient ? Vec(pseudo_inverse(gram) * rhs) : Vec(gram.ldlt().solve(rhs));
  out.mu = y.head(kn);
  out.xi = y.tail(kf);
  out.p_next += c * y;
  return out;
}

double locate_event(const std::function<double(double)>& g_of_tau, double eps, int max_iter) {
  double lo = 0.0;
  double hi = 1.0;
  double g_lo = g_of_tau(lo);
  double g_hi = g_of_tau(hi);
  if (!(g_lo > 0.0) || !(g_hi < 0.0)) {
    throw ContractViolation("locate_event: no sign change on [0, 1]");
  }
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g_of_tau(mid);
    if (std::abs(g_mid) <= eps) return mid;
    if (g_mid > 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  return lo;
}

double time_of_impact(const MechanicalSystem& sys, const Vec& q0, const Vec& q1, int index,
                      const Tolerances& tol) {
  if (index < 0 || index >= sys.num_inequalities()) {
    throw std::out_of_range("time_of_impact: constraint index " + std::to_string(index));
  }
  const auto& g = sys.inequality(index);
  return locate_event([&](double tau) { return g.value((1.0 - tau) * q0 + tau * q1); },
                      tol.eps_active);
}

}  // namespace gvi

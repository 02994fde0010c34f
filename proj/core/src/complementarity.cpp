#include "gvi/complementarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <vector>

namespace gvi {
namespace {

struct Unknowns {
  Vec x;
  Vec lambda;  // over the working set
  Vec nu;
};

class WorkingSetSolver {
 public:
  WorkingSetSolver(const ComplementarityProblem& p, const ComplementarityOptions& o)
      : prob_(p), opt_(o) {}

  Mat forces_w(const Vec& x, const IndexSet& w) const {
    Mat a(prob_.n, static_cast<Eigen::Index>(w.size()));
    if (w.empty()) return a;
    const Mat all = prob_.inequality_forces(x);
    for (std::size_t k = 0; k < w.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = all.col(w[k]);
    return a;
  }

  Mat equality_forces(const Vec& x) const {
    if (prob_.num_equalities == 0) return Mat(prob_.n, 0);
    return prob_.equality_forces(x);
  }

  Vec applied_force(const Vec& x, const IndexSet& w, const Vec& lambda, const Vec& nu) const {
    Vec f = Vec::Zero(prob_.n);
    if (!w.empty()) f += forces_w(x, w) * lambda;
    if (prob_.num_equalities > 0) f += equality_forces(x) * nu;
    return f;
  }

  Vec equations(const Unknowns& u, const IndexSet& w) const {
    const Eigen::Index nw = static_cast<Eigen::Index>(w.size());
    const Eigen::Index ne = prob_.num_equalities;
    Vec out(prob_.n + nw + ne);
    out.head(prob_.n) = prob_.residual(u.x) + applied_force(u.x, w, u.lambda, u.nu);
    if (nw > 0) {
      const Vec c = prob_.inequality_values(u.x);
      for (Eigen::Index k = 0; k < nw; ++k) out[prob_.n + k] = c[w[k]];
    }
    if (ne > 0) out.tail(ne) = prob_.equality_values(u.x);
    return out;
  }

  Mat jacobian(const Unknowns& u, const IndexSet& w) const {
    const Eigen::Index n = prob_.n;
    const Eigen::Index nw = static_cast<Eigen::Index>(w.size());
    const Eigen::Index ne = prob_.num_equalities;
    Mat j = Mat::Zero(n + nw + ne, n + nw + ne);
    Mat top = prob_.residual_jacobian(u.x);
    if (prob_.forces_depend_on_x && (nw > 0 || ne > 0)) {
      top += central_difference_jacobian(
          [&](const Vec& x) { return applied_force(x, w, u.lambda, u.nu); }, u.x);
    }
    j.topLeftCorner(n, n) = top;
    if (nw > 0) {
      j.block(0, n, n, nw) = forces_w(u.x, w);
      const Mat grads = prob_.inequality_gradients(u.x);
      for (Eigen::Index k = 0; k < nw; ++k) j.block(n + k, 0, 1, n) = grads.col(w[k]).transpose();
    }
    if (ne > 0) {
      j.block(0, n + nw, n, ne) = equality_forces(u.x);
      j.block(n + nw, 0, ne, n) = prob_.equality_gradients(u.x).transpose();
    }
    return j;
  }

  /// Damped Newton on the working-set system. Returns nullopt on failure.
  std::optional<Unknowns> solve(const Vec& x0, const IndexSet& w, int& newton_count,
                                double& final_residual) const {
    Unknowns u{x0, Vec::Zero(static_cast<Eigen::Index>(w.size())),
               Vec::Zero(prob_.num_equalities)};
    const Eigen::Index n = prob_.n;
    const Eigen::Index nw = static_cast<Eigen::Index>(w.size());
    const Eigen::Index ne = prob_.num_equalities;
    Vec eq = equations(u, w);
    double res = eq.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < opt_.max_newton; ++it) {
      if (!std::isfinite(res)) return std::nullopt;
      if (res <= opt_.tol) {
        final_residual = res;
        return u;
      }
      ++newton_count;
      const Mat j = jacobian(u, w);
      const Vec delta = j.colPivHouseholderQr().solve(-eq);
      if (!delta.allFinite()) return std::nullopt;

      double step = 1.0;
      bool improved = false;
      Unknowns trial;
      Vec trial_eq;
      double trial_res = res;
      for (int halving = 0; halving <= opt_.max_halvings; ++halving) {
        trial.x = u.x + step * delta.head(n);
        trial.lambda = u.lambda + step * delta.segment(n, nw);
        trial.nu = u.nu + step * delta.tail(ne);
        trial_eq = equations(trial, w);
        trial_res = trial_eq.lpNorm<Eigen::Infinity>();
        if (std::isfinite(trial_res) && trial_res < res) {
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) {
        // Stalled at the roundoff floor of the residual evaluation.
        if (res <= 100.0 * opt_.tol) {
          final_residual = res;
          return u;
        }
        return std::nullopt;
      }
      u = std::move(trial);
      eq = std::move(trial_eq);
      res = trial_res;
    }
    if (res <= opt_.tol) {
      final_residual = res;
      return u;
    }
    return std::nullopt;
  }

 private:
  const ComplementarityProblem& prob_;
  const ComplementarityOptions& opt_;
};

enum class Verdict { Accept, DropMultiplier, AddConstraint };

struct Check {
  Verdict verdict = Verdict::Accept;
  int index = -1;
};

Check check_solution(const ComplementarityProblem& prob, const ComplementarityOptions& opt,
                     const IndexSet& w, const Unknowns& u) {
  Check best;
  double most_negative = -opt.tol;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double l = u.lambda[static_cast<Eigen::Index>(k)];
    if (l < most_negative) {
      most_negative = l;
      best = {Verdict::DropMultiplier, w[k]};
    }
  }
  if (best.verdict != Verdict::Accept) return best;
  if (prob.num_inequalities == 0) return best;
  const Vec c = prob.inequality_values(u.x);
  double most_violated = -opt.feasibility;
  for (int i = 0; i < prob.num_inequalities; ++i) {
    if (w.contains(i)) continue;
    if (c[i] < most_violated) {
      most_violated = c[i];
      best = {Verdict::AddConstraint, i};
    }
  }
  return best;
}

ComplementarityResult package(const ComplementarityProblem& prob, const IndexSet& w,
                              const Unknowns& u, double residual) {
  ComplementarityResult r;
  r.x = u.x;
  r.lambda = Vec::Zero(prob.num_inequalities);
  for (std::size_t k = 0; k < w.size(); ++k) {
    r.lambda[w[k]] = std::max(0.0, u.lambda[static_cast<Eigen::Index>(k)]);
  }
  r.nu = u.nu;
  r.residual = residual;
  r.working_set = w;
  return r;
}

// All subsets of {0..m-1}, ordered by size and then lexicographically.
std::vector<IndexSet> enumerate_subsets(int m) {
  std::vector<IndexSet> out;
  std::vector<int> pick;
  for (int size = 0; size <= m; ++size) {
    std::vector<bool> mask(static_cast<std::size_t>(m), false);
    std::fill(mask.begin(), mask.begin() + size, true);
    do {
      pick.clear();
      for (int i = 0; i < m; ++i) {
        if (mask[static_cast<std::size_t>(i)]) pick.push_back(i);
      }
      out.emplace_back(pick);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return out;
}

}  // namespace

ComplementarityResult solve_complementarity(const ComplementarityProblem& problem, const Vec& x0,
                                            const IndexSet& initial_working_set,
                                            const ComplementarityOptions& options) {
  if (x0.size() != problem.n) throw ContractViolation("complementarity: initial guess size");
  initial_working_set.check_bound(problem.num_inequalities);
  WorkingSetSolver solver(problem, options);

  int newton = 0;
  int passes = 0;
  bool any_newton_success = false;
  std::set<std::vector<int>> visited;
  IndexSet w = initial_working_set;
  Vec start = x0;

  while (visited.insert(w.indices()).second) {
    ++passes;
    double res = 0.0;
    const auto u = solver.solve(start, w, newton, res);
    if (!u) break;
    any_newton_success = true;
    const Check c = check_solution(problem, options, w, *u);
    if (c.verdict == Verdict::Accept) {
      auto r = package(problem, w, *u, res);
      r.newton_iterations = newton;
      r.active_set_passes = passes;
      return r;
    }
    start = u->x;
    w = c.verdict == Verdict::DropMultiplier ? w.without(c.index) : w.with(c.index);
  }

  // Pivoting cycled or Newton failed: exhaustive search.
  if (problem.num_inequalities > options.max_enumeration) {
    throw SolverError("complementarity: active-set pivoting failed with " +
                      std::to_string(problem.num_inequalities) +
                      " inequalities (too many to enumerate)");
  }
  for (const IndexSet& candidate : enumerate_subsets(problem.num_inequalities)) {
    ++passes;
    double res = 0.0;
    const auto u = solver.solve(x0, candidate, newton, res);
    if (!u) continue;
    any_newton_success = true;
    if (check_solution(problem, options, candidate, *u).verdict == Verdict::Accept) {
      auto r = package(problem, candidate, *u, res);
      r.newton_iterations = newton;
      r.active_set_passes = passes;
      return r;
    }
  }
  if (any_newton_success) {
    throw InfeasibleError("complementarity: no working set satisfies the sign conditions");
  }
  throw SolverError("complementarity: Newton failed for every working set");
}

}  // namespace gvi

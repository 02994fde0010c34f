#pragma once

#include <algorithm>
#include <functional>
#include <random>

#include "gvi/system.hpp"

namespace gvi::test {

inline Mat random_spd(std::mt19937& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Mat a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  return a * a.transpose() + 0.5 * Mat::Identity(n, n);
}

inline Vec random_vec(std::mt19937& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                       double step = 1e-6) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += step;
    b[i] -= step;
    g[i] = (f(a) - f(b)) / (2.0 * step);
  }
  return g;
}

inline double rel_err(const Vec& a, const Vec& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

/// m=1 particle on a line, V = 9.8 q, constraint q >= 0.
inline MechanicalSystem particle(double gravity = 9.8) {
  SystemDefinition def;
  def.name = "particle";
  def.mass = Mat::Identity(1, 1);
  def.potential = [gravity](const Vec& q) { return gravity * q[0]; };
  def.potential_gradient = [gravity](const Vec&) { return Vec::Constant(1, gravity); };
  def.potential_hessian = [](const Vec&) { return Mat::Zero(1, 1); };
  def.inequalities.push_back({"floor", [](const Vec& q) { return q[0]; },
                              [](const Vec&) { return Vec::Ones(1); }});
  return MechanicalSystem(std::move(def));
}

/// Free system with V ≡ 0 and no constraints.
inline MechanicalSystem free_system(const Mat& mass) {
  SystemDefinition def;
  def.name = "free";
  def.mass = mass;
  def.potential = [](const Vec&) { return 0.0; };
  def.potential_gradient = [](const Vec& q) { return Vec::Zero(q.size()); };
  def.potential_hessian = [](const Vec& q) { return Mat::Zero(q.size(), q.size()); };
  return MechanicalSystem(std::move(def));
}

}  // namespace gvi::test

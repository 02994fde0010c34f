#include <gtest/gtest.h>

#include "gvi/scenarios.hpp"
#include "gvi/system.hpp"
#include "support.hpp"

namespace gvi {
namespace {

TEST(IndexSet, SortsAndDeduplicates) {
  const IndexSet s(std::vector<int>{3, 1, 3, 0});
  EXPECT_EQ(s.indices(), (std::vector<int>{0, 1, 3}));
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(2));
  EXPECT_EQ(s.position(3), 2);
  EXPECT_EQ(s.position(2), -1);
}

TEST(IndexSet, SetAlgebra) {
  const IndexSet a{0, 2};
  const IndexSet b{1, 2};
  EXPECT_EQ(a.united(b), (IndexSet{0, 1, 2}));
  EXPECT_EQ(a.with(5), (IndexSet{0, 2, 5}));
  EXPECT_EQ(a.without(0), (IndexSet{2}));
  EXPECT_TRUE(IndexSet{2}.is_subset_of(a));
  EXPECT_EQ(IndexSet::range(3), (IndexSet{0, 1, 2}));
  EXPECT_THROW(a.check_bound(2), std::out_of_range);
  EXPECT_NO_THROW(a.check_bound(3));
}

TEST(MechanicalSystem, RejectsBadMass) {
  SystemDefinition def;
  def.potential = [](const Vec&) { return 0.0; };
  def.potential_gradient = [](const Vec& q) { return Vec::Zero(q.size()); };
  def.mass = (Mat(2, 2) << 1.0, 0.5, 0.0, 1.0).finished();
  EXPECT_THROW(MechanicalSystem{def}, ConfigurationError);
  def.mass = (Mat(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
  EXPECT_THROW(MechanicalSystem{def}, ConfigurationError);
  def.mass = Mat::Identity(2, 2);
  def.potential_gradient = nullptr;
  EXPECT_THROW(MechanicalSystem{def}, ConfigurationError);
}

TEST(MechanicalSystem, HessianCapability) {
  SystemDefinition def;
  def.mass = Mat::Identity(2, 2);
  def.potential = [](const Vec& q) { return q.squaredNorm() * q.squaredNorm(); };
  def.potential_gradient = [](const Vec& q) { return Vec(4.0 * q.squaredNorm() * q); };
  const MechanicalSystem sys(def);
  EXPECT_FALSE(sys.has_potential_hessian());
  EXPECT_THROW(sys.potential_hessian(Vec::Ones(2)), CapabilityError);
  const Vec q = (Vec(2) << 0.3, -0.7).finished();
  const Mat exact = 4.0 * q.squaredNorm() * Mat::Identity(2, 2) + 8.0 * q * q.transpose();
  EXPECT_LT((sys.potential_hessian_or_fd(q) - exact).norm(), 1e-6);
}

TEST(Hamiltonian, ParticleValues) {
  const auto sys = test::particle();
  EXPECT_DOUBLE_EQ(hamiltonian(sys, {Vec::Ones(1), Vec::Zero(1), 0.0}), 9.8);
  EXPECT_NEAR(hamiltonian(sys, {Vec::Constant(1, 0.051), Vec::Constant(1, 0.02), 0.0}), 0.5,
              1e-14);
  const auto free = test::free_system(Mat::Identity(3, 3));
  EXPECT_EQ(hamiltonian(free, {Vec::Constant(3, 7.0), Vec::Zero(3), 0.0}), 0.0);
}

TEST(Hamiltonian, EvenInMomentum) {
  std::mt19937 rng(1);
  for (auto name : all_scenarios()) {
    const auto sc = build_scenario({name, {}});
    const Vec p = test::random_vec(rng, sc.system.dim());
    EXPECT_EQ(hamiltonian(sc.system, {sc.initial.q, p, 0.0}),
              hamiltonian(sc.system, {sc.initial.q, Vec(-p), 0.0}));
  }
}

TEST(Constraints, ValuesAndGradients) {
  const auto sys = test::particle();
  const auto cv = constraint_values(sys, Vec::Constant(1, 0.25));
  EXPECT_DOUBLE_EQ(cv.g[0], 0.25);
  EXPECT_EQ(cv.f.size(), 0);
  const Mat g = constraint_gradient_matrix(sys, Vec::Zero(1), IndexSet{0}, ConstraintKind::Inequality);
  EXPECT_EQ(g.rows(), 1);
  EXPECT_EQ(g(0, 0), 1.0);
  EXPECT_EQ(constraint_gradient_matrix(sys, Vec::Zero(1), {}, ConstraintKind::Inequality).cols(), 0);
  EXPECT_THROW(constraint_gradient_matrix(sys, Vec::Zero(1), IndexSet{1}, ConstraintKind::Inequality),
               std::out_of_range);
  EXPECT_THROW(constraint_gradient_matrix(sys, Vec::Zero(1), IndexSet{0}, ConstraintKind::Equality),
               std::out_of_range);
}

TEST(Constraints, OscillatorSeparation) {
  const auto sc = build_scenario({ScenarioName::NonlinearOscillator, {}});
  const Vec q = (Vec(4) << 0.0, -1.4, 0.0, 1.4).finished();
  EXPECT_NEAR(inequality_values(sc.system, q)[0], 0.8, 1e-14);
  const Mat g = constraint_gradient_matrix(sc.system, q, IndexSet{0}, ConstraintKind::Inequality);
  EXPECT_LT((g.col(0) - (Vec(4) << 0.0, -1.0, 0.0, 1.0).finished()).norm(), 1e-14);
}

TEST(Constraints, CradleHangingOnManifold) {
  const auto sc = build_scenario({ScenarioName::NewtonsCradle, {{"pulled", 0.0}}});
  EXPECT_LT(equality_values(sc.system, sc.initial.q).lpNorm<Eigen::Infinity>(), 1e-14);
}

// Central differences of every potential and constraint against the
// supplied gradients.
TEST(Constraints, FiniteDifferenceConsistency) {
  std::mt19937 rng(7);
  for (auto name : all_scenarios()) {
    const auto sc = build_scenario({name, {}});
    const auto& sys = sc.system;
    for (int trial = 0; trial < 100; ++trial) {
      const Vec q = sc.initial.q + test::random_vec(rng, sys.dim(), 0.05);
      EXPECT_LT(test::rel_err(sys.potential_gradient(q),
                              test::fd_gradient([&](const Vec& x) { return sys.potential(x); }, q)),
                1e-5)
          << to_string(name);
      for (const auto* list : {&sys.inequalities(), &sys.equalities()}) {
        for (const auto& c : *list) {
          EXPECT_LT(test::rel_err(c.gradient(q), test::fd_gradient(c.value, q)), 1e-5)
              << to_string(name) << " " << c.name;
        }
      }
    }
  }
}

TEST(Constraints, CentralDifferenceJacobian) {
  const auto field = [](const Vec& x) {
    return Vec((Vec(2) << x[0] * x[1], std::sin(x[0])).finished());
  };
  const Vec x = (Vec(2) << 0.4, 1.3).finished();
  const Mat exact = (Mat(2, 2) << x[1], x[0], std::cos(x[0]), 0.0).finished();
  EXPECT_LT((central_difference_jacobian(field, x) - exact).norm(), 1e-8);
}

}  // namespace
}  // namespace gvi

#include <gtest/gtest.h>

#include "gvi/integrators.hpp"
#include "gvi/scenarios.hpp"
#include "gvi/solvers.hpp"
#include "support.hpp"

namespace gvi {
namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

const Quadrature kVerlet{QuadratureRule::Verlet, 0.1};

MechanicalSystem pendulum() {
  SystemDefinition def;
  def.name = "pendulum";
  def.mass = Mat::Identity(2, 2);
  def.potential = [](const Vec& q) { return 9.8 * q[1]; };
  def.potential_gradient = [](const Vec&) { return (Vec(2) << 0.0, 9.8).finished(); };
  def.potential_hessian = [](const Vec&) { return Mat::Zero(2, 2); };
  def.equalities.push_back({"rod", [](const Vec& q) { return q.norm() - 1.0; },
                            [](const Vec& q) { return Vec(q / q.norm()); }});
  def.particle_dim = 2;
  return MechanicalSystem(std::move(def));
}

TEST(PositionUpdate, FreeDrift) {
  const auto sys = test::particle();
  const auto sol = position_update_solve(sys, kVerlet, v1(0.0), v1(1.0), IndexSet{}, Tolerances{});
  EXPECT_NEAR(sol.q_next[0], 0.051, 1e-14);
  EXPECT_EQ(sol.lambda.size(), 0);
}

TEST(PositionUpdate, RestingForceBalance) {
  const auto sys = test::particle();
  const auto sol = position_update_solve(sys, kVerlet, v1(0.0), v1(0.0), IndexSet{0}, Tolerances{});
  EXPECT_NEAR(sol.q_next[0], 0.0, 1e-12);
  ASSERT_EQ(sol.lambda.size(), 1);
  EXPECT_NEAR(sol.lambda[0], 0.49, 1e-12);
  EXPECT_EQ(sol.working_set, (IndexSet{0}));
}

TEST(PositionUpdate, LeavingContactReleasesConstraint) {
  const auto sys = test::particle();
  const auto sol = position_update_solve(sys, kVerlet, v1(0.0), v1(2.0), IndexSet{0}, Tolerances{});
  EXPECT_GT(sol.q_next[0], 0.0);
  EXPECT_EQ(sol.lambda[0], 0.0);
  EXPECT_TRUE(sol.working_set.empty());
}

TEST(PositionUpdate, ComplementarityInvariants) {
  const auto sc = build_scenario({ScenarioName::NewtonsCradle, {{"pulled", 0.0}}});
  const auto& sys = sc.system;
  const Tolerances tol;
  const Quadrature quad = sc.config.quadrature;
  const IndexSet all = IndexSet::range(sys.num_inequalities());
  const auto sol = position_update_solve(sys, quad, sc.initial.q, sc.initial.p, all, tol);
  EXPECT_GE(sol.lambda.minCoeff(), 0.0);
  EXPECT_LE(sol.residual, tol.eps_solver);
  const Vec g = inequality_values(sys, sol.q_next);
  for (int i = 0; i < sys.num_inequalities(); ++i) {
    EXPECT_GE(g[i], -tol.eps_active);
    EXPECT_LE(std::abs(sol.lambda[i] * g[i]), tol.eps_solver);
  }
  EXPECT_LE(equality_values(sys, sol.q_next).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(PositionUpdate, PendulumStaysOnCircle) {
  const auto sys = pendulum();
  const Tolerances tol;
  const Quadrature quad{QuadratureRule::Verlet, 0.05};
  Vec q = (Vec(2) << 1.0, 0.0).finished();
  Vec p = Vec::Zero(2);
  for (int step = 0; step < 200; ++step) {
    const auto sol = position_update_solve(sys, quad, q, p, IndexSet{}, tol);
    ASSERT_LE(std::abs(sys.equality(0).value(sol.q_next)), 1e-10) << "step " << step;
    const auto mom = momentum_update_solve(sys, quad, q, sol.q_next, IndexSet{}, tol);
    EXPECT_LE(std::abs(sys.equality(0).gradient(sol.q_next).dot(mom.p_next)), 1e-10);
    q = sol.q_next;
    p = mom.p_next;
  }
}

TEST(MomentumUpdate, FreeIsD2) {
  const auto sc = build_scenario({ScenarioName::SpringSphere, {}});
  const auto& sys = sc.system;
  std::mt19937 rng(8);
  const Vec q0 = sc.initial.q;
  const Vec q1 = q0 + test::random_vec(rng, sys.dim(), 0.01);
  const auto mom = momentum_update_solve(sys, kVerlet, q0, q1, IndexSet{}, Tolerances{});
  EXPECT_EQ(mom.p_next, d2(kVerlet, sys, q0, q1));
}

TEST(MomentumUpdate, RestingContactKillsNormalMomentum) {
  const auto sys = test::particle();
  const auto mom = momentum_update_solve(sys, kVerlet, v1(0.0), v1(0.0), IndexSet{0}, Tolerances{});
  EXPECT_NEAR(mom.p_next[0], 0.0, 1e-14);
  EXPECT_EQ(mom.cotangent_set, (IndexSet{0}));
}

TEST(MomentumUpdate, CradleCotangency) {
  const auto sc = build_scenario({ScenarioName::NewtonsCradle, {{"pulled", 0.0}}});
  const auto& sys = sc.system;
  const Tolerances tol;
  const IndexSet all = IndexSet::range(sys.num_inequalities());
  const auto sol = position_update_solve(sys, sc.config.quadrature, sc.initial.q, sc.initial.p,
                                         all, tol);
  const auto mom =
      momentum_update_solve(sys, sc.config.quadrature, sc.initial.q, sol.q_next, all, tol);
  const Vec minv_p = sys.apply_mass_inverse(mom.p_next);
  EXPECT_LE((equality_gradient_matrix(sys, sol.q_next).transpose() * minv_p)
                .lpNorm<Eigen::Infinity>(), 1e-10);
  const Mat n = constraint_gradient_matrix(sys, sol.q_next, mom.cotangent_set,
                                           ConstraintKind::Inequality);
  EXPECT_FALSE(mom.cotangent_set.empty());
  EXPECT_LE((n.transpose() * minv_p).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(MomentumUpdate, ReductionToVariationalStep) {
  std::mt19937 rng(9);
  const Tolerances tol;
  for (auto name : {ScenarioName::SpringSphere, ScenarioName::NonlinearOscillator}) {
    const auto sc = build_scenario({name, {}});
    const auto& sys = sc.system;
    for (auto rule : {QuadratureRule::Verlet, QuadratureRule::Midpoint}) {
      const Quadrature quad{rule, 0.02};
      PhaseState s = sc.initial;
      s.q += test::random_vec(rng, sys.dim(), 0.05);
      s.p = test::random_vec(rng, sys.dim());
      const auto sol = position_update_solve(sys, quad, s.q, s.p, IndexSet{}, tol);
      const auto mom = momentum_update_solve(sys, quad, s.q, sol.q_next, IndexSet{}, tol);
      const auto ref = variational_step(sys, quad, s, tol);
      EXPECT_LE((sol.q_next - ref.state.q).norm(), 1e-12);
      EXPECT_LE((mom.p_next - ref.state.p).norm(), 1e-12);
    }
  }
}

TEST(Predictor, HandValue) {
  // x = q + h·M⁻¹(p − (h/2)∇V(q)) = 0.04 + 0.1·(−0.98 − 0.49)
  const auto sys = test::particle();
  EXPECT_NEAR(forward_predictor(sys, kVerlet, v1(0.04), v1(-0.98), Tolerances{})[0], -0.107,
              1e-14);
  EXPECT_NEAR(forward_predictor(sys, kVerlet, v1(0.0), v1(1.0), Tolerances{})[0], 0.051, 1e-14);
}

TEST(Predictor, EquilibriumAndFreeFlight) {
  const Mat mass = (Mat(2, 2) << 2.0, 0.5, 0.5, 1.0).finished();
  const auto sys = test::free_system(mass);
  const Vec q = (Vec(2) << 0.3, -0.2).finished();
  const Vec p = (Vec(2) << 1.0, 2.0).finished();
  for (auto rule : {QuadratureRule::Verlet, QuadratureRule::Midpoint}) {
    const Quadrature quad{rule, 0.1};
    EXPECT_LT((forward_predictor(sys, quad, q, Vec::Zero(2), Tolerances{}) - q).norm(), 1e-14);
    const Vec expected = q + 0.1 * mass.inverse() * p;
    EXPECT_LT((forward_predictor(sys, quad, q, p, Tolerances{}) - expected).norm(), 1e-12);
  }
}

TEST(Predictor, MidpointSatisfiesResidual) {
  const auto sc = build_scenario({ScenarioName::LennardJonesChain, {}});
  const auto& sys = sc.system;
  const Quadrature quad{QuadratureRule::Midpoint, 0.01};
  const Vec x = forward_predictor(sys, quad, sc.initial.q, sc.initial.p, Tolerances{});
  EXPECT_LT((d1(quad, sys, sc.initial.q, x) + sc.initial.p).norm(), 1e-9);
}

TEST(TimeOfImpact, LinearRoots) {
  EXPECT_DOUBLE_EQ(locate_event([](double t) { return 0.5 - t; }, 1e-12), 0.5);
  const auto sys = test::particle();
  EXPECT_NEAR(time_of_impact(sys, v1(0.051), v1(-0.047), 0, Tolerances{}), 0.051 / 0.098, 1e-8);
}

TEST(TimeOfImpact, SphereContactResidual) {
  const auto sc = build_scenario({ScenarioName::NonlinearOscillator, {}});
  const auto& sys = sc.system;
  const Vec q0 = (Vec(4) << 0.0, -1.5, 0.1, 1.5).finished();
  const Vec q1 = (Vec(4) << 0.0, -0.7, 0.1, 0.7).finished();
  const Tolerances tol;
  const double tau = time_of_impact(sys, q0, q1, 0, tol);
  EXPECT_LE(std::abs(sys.inequality(0).value((1.0 - tau) * q0 + tau * q1)), 1e-9);
}

TEST(TimeOfImpact, Contract) {
  const auto sys = test::particle();
  EXPECT_THROW(time_of_impact(sys, v1(-0.1), v1(-0.2), 0, Tolerances{}), ContractViolation);
  EXPECT_THROW(time_of_impact(sys, v1(0.1), v1(0.2), 0, Tolerances{}), ContractViolation);
  EXPECT_THROW(time_of_impact(sys, v1(0.1), v1(-0.2), 3, Tolerances{}), std::out_of_range);
}

TEST(TimeOfImpact, FeasibleEndWhenToleranceUnreachable) {
  // A jump discontinuity never gets within eps: the feasible end comes back.
  const double tau = locate_event([](double t) { return t < 0.3 ? 1.0 : -1.0; }, 1e-12);
  EXPECT_LT(tau, 0.3);
  EXPECT_NEAR(tau, 0.3, 1e-12);
}

}  // namespace
}  // namespace gvi

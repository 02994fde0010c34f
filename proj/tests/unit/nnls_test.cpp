#include <gtest/gtest.h>

#include <limits>

#include "gvi/nnls.hpp"
#include "support.hpp"

namespace gvi {
namespace {

// Enumerates every passive set P, keeps the KKT points of
// min ½xᵀQx − bᵀx, x >= 0, and returns the one with least objective.
Vec brute_force_nnls(const Mat& q, const Vec& b) {
  const Eigen::Index k = b.size();
  Vec best = Vec::Zero(k);
  double best_obj = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<Eigen::Index> passive;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (mask & (1u << i)) passive.push_back(i);
    }
    Vec x = Vec::Zero(k);
    if (!passive.empty()) {
      Mat qp(passive.size(), passive.size());
      Vec bp(passive.size());
      for (std::size_t r = 0; r < passive.size(); ++r) {
        bp[r] = b[passive[r]];
        for (std::size_t c = 0; c < passive.size(); ++c) qp(r, c) = q(passive[r], passive[c]);
      }
      const Vec xp = qp.fullPivLu().solve(bp);
      if ((qp * xp - bp).norm() > 1e-9) continue;
      for (std::size_t r = 0; r < passive.size(); ++r) x[passive[r]] = xp[r];
    }
    if (x.minCoeff() < -1e-12) continue;
    const Vec grad = q * x - b;
    if (grad.minCoeff() < -1e-9) continue;
    const double obj = 0.5 * x.dot(q * x) - b.dot(x);
    if (obj < best_obj) {
      best_obj = obj;
      best = x;
    }
  }
  return best;
}

TEST(Nnls, ScalarExamples) {
  const Mat one = Mat::Ones(1, 1);
  EXPECT_NEAR(energy_projection_nnls(one, one, Vec::Constant(1, -2.0))[0], 4.0, 1e-14);
  EXPECT_EQ(energy_projection_nnls(one, one, Vec::Constant(1, 3.0))[0], 0.0);
}

TEST(Nnls, KktResidualAtSolution) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat q = test::random_spd(rng, 4);
    const Vec b = test::random_vec(rng, 4);
    const NnlsResult r = solve_nnls_normal(q, b);
    EXPECT_LE(r.kkt_residual, 1e-10);
    EXPECT_GE(r.x.minCoeff(), 0.0);
  }
}

TEST(Nnls, HandlesSemidefiniteGram) {
  const Vec g = (Vec(2) << 1.0, 1.0).finished();
  const Mat q = g * g.transpose();
  const NnlsResult r = solve_nnls_normal(q, (Vec(2) << 2.0, 2.0).finished());
  EXPECT_NEAR(r.x.sum(), 2.0, 1e-12);
  EXPECT_GE(r.x.minCoeff(), 0.0);
}

TEST(Nnls, MatchesBruteForceEnumeration) {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = dim(rng);
    const int k = std::min(n, 1 + trial % 3);
    const Mat metric = test::random_spd(rng, n).inverse();
    Mat g(n, k);
    for (int c = 0; c < k; ++c) g.col(c) = test::random_vec(rng, n);
    const Vec p = test::random_vec(rng, n);
    const Vec lambda = energy_projection_nnls(g, metric, p);
    const Mat ag = metric * g;
    const Mat gram = 0.5 * (g.transpose() * ag + (g.transpose() * ag).transpose());
    const Vec oracle = brute_force_nnls(gram, -2.0 * ag.transpose() * p);
    const double cond = gram.jacobiSvd().singularValues().maxCoeff() /
                        gram.jacobiSvd().singularValues().minCoeff();
    EXPECT_LT((lambda - oracle).lpNorm<Eigen::Infinity>(),
              1e-13 * cond * std::max(1.0, oracle.lpNorm<Eigen::Infinity>()))
        << "trial " << trial << " cond " << cond;
  }
}

}  // namespace
}  // namespace gvi

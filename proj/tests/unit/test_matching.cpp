#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "vnlab/lap.hpp"
#include "vnlab/matching.hpp"
#include "vnlab/models.hpp"
#include "vnlab/spectral.hpp"

using namespace vnlab;

namespace {

std::vector<std::size_t> vec(const Permutation& p) { return {p.image().begin(), p.image().end()}; }

}  // namespace

TEST(Lap, MatchesBruteForce) {
  Rng rng({31, 0});
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(6);
    Eigen::MatrixXd c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c(i, j) = std::floor(rng.uniform() * 10) - 3;
    double best = 1e300;
    for (const auto& p : oracle::all_permutations(n)) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += c(i, p[i]);
      best = std::min(best, s);
    }
    const auto got = solve_lap(c);
    double s = 0;
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_FALSE(seen[got[i]]);
      seen[got[i]] = true;
      s += c(i, got[i]);
    }
    EXPECT_DOUBLE_EQ(s, best);
  }
  EXPECT_THROW(solve_lap(Eigen::MatrixXd(2, 3)), InvalidInput);
}

TEST(GmDelta, MatchesDenseMatrixFormula) {
  Rng rng({32, 0});
  for (int t = 0; t < 100; ++t) {
    auto a = sample_er(6, 0.5, rng), b = sample_er(6, 0.5, rng);
    Permutation q(rng.permutation(6));
    EXPECT_NEAR(gm_delta(a, b, q), oracle::delta(a, b, vec(q)), 1e-12);
    EXPECT_DOUBLE_EQ(gm_delta(a, permute(a, q), q), 0.0);
  }
}

TEST(GmDelta, TwoVertexExample) {
  auto k2 = make_graph(2, {{1, 2}});
  auto e2 = make_graph(2, {});
  EXPECT_DOUBLE_EQ(gm_delta(k2, e2, Permutation::identity(2)), std::sqrt(2.0));
  EXPECT_THROW(gm_delta(k2, make_graph(3, {}), Permutation::identity(2)), InvalidInput);
}

TEST(ExactMatch, MatchesBruteForceArgmin) {
  Rng rng({33, 0});
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 3 + rng.below(4);
    auto a = sample_er(n, 0.5, rng), b = sample_er(n, 0.4, rng);
    const auto [best, arg] = oracle::argmin_delta(a, b);
    const auto got = exact_match(a, b);
    EXPECT_NEAR(got.objective, best, 1e-9);
    EXPECT_EQ(vec(got.permutation), arg.front());
    EXPECT_TRUE(got.certified);
    EXPECT_EQ(identity_is_unique_minimizer(a, b), arg.size() == 1 && Permutation(arg.front()).is_identity());
  }
}

TEST(ExactMatch, PinnedSolveRespectsPin) {
  Rng rng({34, 0});
  for (int t = 0; t < 30; ++t) {
    auto a = sample_er(6, 0.5, rng), b = sample_er(6, 0.5, rng);
    const std::size_t row = rng.below(6), col = rng.below(6);
    double best = 1e300;
    for (const auto& p : oracle::all_permutations(6))
      if (p[row] == col) best = std::min(best, oracle::delta(a, b, p));
    const auto got = exact_match_pinned(a, b, row, col);
    EXPECT_EQ(got.permutation(row), col);
    EXPECT_NEAR(got.objective, best, 1e-9);
  }
}

TEST(ExactMatch, RecoversIsomorphicCopies) {
  Rng rng({35, 0});
  for (int t = 0; t < 10; ++t) {
    auto a = sample_asymmetric([](Rng& r) { return sample_er(10, 0.5, r); }, rng);
    Permutation s(rng.permutation(10));
    const auto got = exact_match(a, permute(a, s));
    EXPECT_EQ(got.objective, 0.0);
    EXPECT_EQ(got.permutation, s);
  }
  EXPECT_THROW(exact_match(make_graph(11, {}), make_graph(11, {})), CapExceeded);
  EXPECT_TRUE(identity_is_unique_minimizer(make_graph(6, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 5}, {4, 6}}),
                                           make_graph(6, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 5}, {4, 6}})));
  EXPECT_FALSE(identity_is_unique_minimizer(make_graph(3, {{1, 2}}), make_graph(3, {{1, 2}})));
}

TEST(RelaxedMatch, NeverBeatsExactAndIsAPermutation) {
  Rng rng({36, 0});
  for (int t = 0; t < 20; ++t) {
    auto a = sample_er(8, 0.5, rng), b = sample_er(8, 0.5, rng);
    const auto r = relaxed_match(a, b);
    EXPECT_FALSE(r.certified);
    EXPECT_GE(r.objective + 1e-12, exact_match(a, b).objective);
    EXPECT_NEAR(r.objective, gm_delta(a, b, r.permutation), 1e-12);
    EXPECT_NEAR(r.soft.rowwise().sum().maxCoeff(), 1.0, 1e-9);
    EXPECT_NEAR(r.soft.colwise().sum().minCoeff(), 1.0, 1e-9);
    EXPECT_GE(r.soft.minCoeff(), -1e-12);
  }
}

TEST(RelaxedMatch, IdentityInitOnIdenticalGraphsStaysPut) {
  Rng rng({37, 0});
  auto a = sample_er(30, 0.5, rng);
  RelaxedMatchConfig cfg;
  cfg.init = RelaxedMatchConfig::Init::Identity;
  const auto r = relaxed_match(a, a, cfg);
  EXPECT_TRUE(r.permutation.is_identity());
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(Spectral, EmbeddingSeparatesPlantedBlocks) {
  Rng rng({38, 0});
  SbmParams sp;
  sp.B = Eigen::MatrixXd(2, 2);
  sp.B << 0.8, 0.05, 0.05, 0.8;
  sp.b = contiguous_blocks({20, 20});
  auto g = sample_sbm(sp, rng);
  const auto X = spectral_embedding(g, 2);
  EXPECT_EQ(X.rows(), 40);
  EXPECT_EQ(X.cols(), 2);
  const auto cl = kmeans(X, 2);
  for (std::size_t i = 1; i < 20; ++i) EXPECT_EQ(cl.label[i], cl.label[0]);
  for (std::size_t i = 21; i < 40; ++i) EXPECT_EQ(cl.label[i], cl.label[20]);
  EXPECT_NE(cl.label[0], cl.label[20]);
}

TEST(Spectral, ProcrustesRecoversRotation) {
  Rng rng({39, 0});
  Eigen::MatrixXd X(10, 2);
  for (Eigen::Index i = 0; i < 10; ++i) X.row(i) << rng.uniform(), rng.uniform();
  const double th = 0.7;
  Eigen::Matrix2d W;
  W << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Eigen::MatrixXd Y = X * W;
  const Eigen::MatrixXd R = orthogonal_procrustes(Y, X);
  EXPECT_LT((Y * R - X).norm(), 1e-9);
}

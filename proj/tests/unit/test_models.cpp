#include <gtest/gtest.h>

#include <cmath>

#include "vnlab/models.hpp"
#include "vnlab/rng.hpp"

using namespace vnlab;

namespace {

double density(const LabeledGraph& g) {
  const double n = static_cast<double>(g.order());
  return static_cast<double>(g.edge_count()) / (n * (n - 1) / 2);
}

}  // namespace

TEST(Rng, SubstreamsAreReproducibleAndDistinct) {
  RngState s{42, 0};
  Rng a(s.substream(3)), b(s.substream(3)), c(s.substream(4));
  const auto x = a.permutation(20);
  EXPECT_EQ(x, b.permutation(20));
  EXPECT_NE(x, c.permutation(20));
  Rng d(s);
  for (int i = 0; i < 1000; ++i) {
    const auto v = d.below(7);
    EXPECT_LT(v, 7u);
    const double u = d.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Er, DensityMatchesP) {
  Rng rng({1, 0});
  double total = 0;
  for (int t = 0; t < 40; ++t) total += density(sample_er(40, 0.3, rng));
  EXPECT_NEAR(total / 40, 0.3, 0.01);
  EXPECT_EQ(sample_er(10, 0.0, rng).edge_count(), 0u);
  EXPECT_EQ(sample_er(10, 1.0, rng).edge_count(), 45u);
  EXPECT_THROW(sample_er(10, 1.5, rng), InvalidInput);
}

TEST(Sbm, BlockDensities) {
  Rng rng({2, 0});
  SbmParams sp;
  sp.B = Eigen::MatrixXd(2, 2);
  sp.B << 0.8, 0.1, 0.1, 0.4;
  sp.b = contiguous_blocks({30, 30});
  std::size_t in0 = 0, in1 = 0, cross = 0;
  const int reps = 20;
  for (int t = 0; t < reps; ++t) {
    auto g = sample_sbm(sp, rng);
    for (std::size_t i = 0; i < 60; ++i)
      for (std::size_t j = i + 1; j < 60; ++j)
        if (g.has_edge(i, j)) (sp.b[i] != sp.b[j] ? cross : sp.b[i] == 0 ? in0 : in1)++;
  }
  EXPECT_NEAR(in0 / (reps * 435.0), 0.8, 0.02);
  EXPECT_NEAR(in1 / (reps * 435.0), 0.4, 0.02);
  EXPECT_NEAR(cross / (reps * 900.0), 0.1, 0.02);
  sp.b[0] = 5;
  EXPECT_THROW(sample_sbm(sp, rng), InvalidInput);
  SbmParams asym;
  asym.B = Eigen::MatrixXd(2, 2);
  asym.B << 0.5, 0.2, 0.3, 0.5;
  asym.b = {0, 1};
  EXPECT_THROW(sample_sbm(asym, rng), InvalidInput);
}

TEST(Rdpg, MatchesDotProducts) {
  Rng rng({3, 0});
  Eigen::MatrixXd X(40, 1);
  X.setConstant(std::sqrt(0.5));
  double total = 0;
  for (int t = 0; t < 20; ++t) total += density(sample_rdpg(X, rng));
  EXPECT_NEAR(total / 20, 0.5, 0.02);
  X.setConstant(1.5);
  EXPECT_THROW(sample_rdpg(X, rng), InvalidInput);
}

TEST(CorrelatedEr, MarginalsAndCorrelation) {
  Rng rng({4, 0});
  for (double rho : {0.0, 0.5, 0.9}) {
    const auto params = CorrelatedErParams::constant(40, 0.3, rho);
    double sa = 0, sb = 0, sab = 0, cnt = 0;
    for (int t = 0; t < 30; ++t) {
      auto [a, b] = sample_correlated_er(params, rng);
      for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = i + 1; j < 40; ++j) {
          const double x = a.has_edge(i, j), y = b.has_edge(i, j);
          sa += x;
          sb += y;
          sab += x * y;
          cnt += 1;
        }
    }
    const double pa = sa / cnt, pb = sb / cnt, cov = sab / cnt - pa * pb;
    EXPECT_NEAR(pa, 0.3, 0.015);
    EXPECT_NEAR(pb, 0.3, 0.015);
    EXPECT_NEAR(cov / std::sqrt(pa * (1 - pa) * pb * (1 - pb)), rho, 0.04);
  }
  auto [a, b] = sample_correlated_er(CorrelatedErParams::constant(20, 0.4, 1.0), rng);
  EXPECT_TRUE(same_structure(a, b));
  EXPECT_EQ(a.label(0).ns, Namespace::V1);
  EXPECT_EQ(b.label(0).ns, Namespace::V2);
}

TEST(CorrelatedEr, RejectsInfeasibleCorrelation) {
  Rng rng({5, 0});
  auto [lo, hi] = CorrelatedErParams::feasible_range(0.2);
  EXPECT_DOUBLE_EQ(lo, -0.25);
  EXPECT_DOUBLE_EQ(hi, 1.0);
  EXPECT_THROW(sample_correlated_er(CorrelatedErParams::constant(5, 0.2, -0.5), rng), InvalidInput);
  EXPECT_NO_THROW(sample_correlated_er(CorrelatedErParams::constant(5, 0.2, -0.25), rng));
}

TEST(NominatablePair, ValidatesCoreAndJunk) {
  auto g1 = make_graph(3, {{1, 2}});
  auto g2 = make_graph(3, {{2, 3}}, Namespace::V2);
  NominatablePair p(g1, g2, 3);
  EXPECT_EQ(p.counterpart({Namespace::V1, 2}), (VertexLabel{Namespace::V2, 2}));
  EXPECT_THROW(NominatablePair(g2, g2, 3), InvalidInput);
  EXPECT_THROW(NominatablePair(g1, g2, 4), InvalidInput);
  auto shifted = with_labels(g2, sequential_labels(3, Namespace::V2, 2));
  EXPECT_THROW(NominatablePair(g1, shifted, 2), InvalidInput);
  EXPECT_THROW(NominatablePair(g1, shifted, 1), InvalidInput);
  auto junk = with_labels(g2, {{Namespace::V2, 1}, {Namespace::V2, 10}, {Namespace::V2, 11}});
  NominatablePair q(g1, junk, 1);
  EXPECT_TRUE(q.in_core({Namespace::V1, 1}));
  EXPECT_FALSE(q.in_core({Namespace::V1, 2}));
  EXPECT_THROW(q.counterpart({Namespace::V1, 2}), InvalidInput);
}

TEST(Asymmetric, SamplerRetriesUntilAsymmetric) {
  Rng rng({6, 0});
  for (int t = 0; t < 10; ++t)
    EXPECT_TRUE(is_asymmetric(sample_asymmetric([](Rng& r) { return sample_er(8, 0.5, r); }, rng)));
  EXPECT_THROW(sample_asymmetric([](Rng& r) { return sample_er(4, 0.5, r); }, rng, 50), InvalidInput);
}

TEST(OneGraphEncoding, SeedsBecomeLabelVertices) {
  auto g = make_graph(6, {{1, 2}, {2, 3}, {4, 5}, {5, 6}, {3, 4}});
  const std::vector<std::size_t> blocks{0, 0, 0, 1, 1, 1};
  const std::vector<std::vector<VertexLabel>> seeds{{{Namespace::V1, 1}}, {{Namespace::V1, 6}}};
  auto pair = encode_one_graph_instance(g, blocks, seeds);
  EXPECT_EQ(pair.core_size, 4u);
  EXPECT_EQ(pair.g1.order(), 8u);
  EXPECT_EQ(pair.g2.order(), 4u);
  const auto l1 = pair.g1.require_index({Namespace::V1, 7});
  const auto l2 = pair.g1.require_index({Namespace::V1, 8});
  EXPECT_TRUE(pair.g1.has_edge(pair.g1.require_index({Namespace::V1, 1}), l1));
  EXPECT_TRUE(pair.g1.has_edge(pair.g1.require_index({Namespace::V1, 6}), l2));
  EXPECT_EQ(pair.g1.degree(l1), 1u);
  EXPECT_EQ(pair.g2.edge_count(), 3u);
  EXPECT_THROW(encode_one_graph_instance(g, blocks, {{{Namespace::V1, 4}}, {}}), InvalidInput);
}

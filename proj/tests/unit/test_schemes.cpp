#include <gtest/gtest.h>

#include "vnlab/adversarial.hpp"
#include "vnlab/eval.hpp"
#include "vnlab/schemes.hpp"

using namespace vnlab;

namespace {

const VertexLabel kV{Namespace::V1, 1};

LabeledGraph asym6(Namespace ns = Namespace::V1) { return asymmetric_graph(6, ns); }

Obfuscation shuffled(const LabeledGraph& g2, Rng& rng, std::uint64_t offset = 100) {
  auto perm = rng.permutation(g2.order());
  std::vector<std::uint64_t> ids;
  for (auto p : perm) ids.push_back(offset + p);
  return make_obfuscation(g2.labels(), ids);
}

std::vector<Scheme> label_free_schemes() {
  return {random_baseline_scheme(0), random_baseline_scheme(5), gm_scheme({GmMode::Exact}),
          gm_scheme({GmMode::Relaxed}), spectral_scheme(2, SpectralAlignment::Density),
          spectral_scheme(2, SpectralAlignment::SeedlessProcrustes), feature_scheme(gm_scheme({GmMode::Exact}))};
}

}  // namespace

TEST(NominationList, RankAndReverse) {
  NominationList l({{Namespace::W, 3}, {Namespace::W, 1}, {Namespace::W, 2}});
  EXPECT_EQ(l.rank({Namespace::W, 1}), 2u);
  EXPECT_EQ(l[1], (VertexLabel{Namespace::W, 3}));
  EXPECT_EQ(l.reversed().rank({Namespace::W, 3}), 3u);
  EXPECT_THROW(l.rank({Namespace::W, 9}), InvalidInput);
}

TEST(Scheme, RejectsUnobfuscatedOrForeignInputs) {
  auto s = random_baseline_scheme();
  auto g1 = asym6();
  auto g2 = asym6(Namespace::V2);
  EXPECT_THROW(s.nominate(g1, g2, kV), InvalidInput);
  EXPECT_THROW(s.nominate(g1, apply_obfuscation(g2, positional_obfuscation(g2)), {Namespace::V1, 99}), InvalidInput);
}

TEST(ConsistencyCriterion, HoldsForLabelFreeSchemes) {
  Rng rng({41, 0});
  std::vector<std::pair<LabeledGraph, LabeledGraph>> inputs;
  for (int t = 0; t < 3; ++t) {
    auto [a, b] = sample_correlated_er(CorrelatedErParams::constant(8, 0.5, 0.6), rng);
    inputs.emplace_back(a, b);
  }
  auto cyc = make_graph(8, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 1}});
  inputs.emplace_back(cyc, with_labels(cyc, sequential_labels(8, Namespace::V2)));
  auto path = make_graph(8, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}}, Namespace::V2);
  inputs.emplace_back(cyc, path);
  for (const auto& scheme : label_free_schemes())
    for (const auto& [g1, g2] : inputs)
      for (int r = 0; r < 4; ++r)
        EXPECT_TRUE(check_consistency_criterion(scheme, g1, g2, kV, shuffled(g2, rng), shuffled(g2, rng, 500)))
            << scheme.name();
}

TEST(ConsistencyCriterion, DetectsLabelDependentScheme) {
  Rng rng({42, 0});
  auto g1 = asym6();
  auto g2 = asym6(Namespace::V2);
  auto bad = fixed_label_first_scheme({Namespace::W, 100});
  bool violated = false;
  for (int r = 0; r < 20 && !violated; ++r)
    violated = !check_consistency_criterion(bad, g1, g2, kV, shuffled(g2, rng), shuffled(g2, rng));
  EXPECT_TRUE(violated);
}

TEST(RandomBaseline, UniformClassGivesChanceErrors) {
  const auto F = uniform_iso_class_distribution(asym6(), asym6(Namespace::V2), kV);
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const auto err = exact_errors(random_baseline_scheme(seed), F);
    for (std::size_t k = 1; k < 6; ++k) EXPECT_EQ(err[k], chance_line(6, k));
  }
}

TEST(RandomBaseline, SeedsGiveDifferentRankings) {
  auto g1 = asym6();
  auto og2 = apply_obfuscation(asym6(Namespace::V2), positional_obfuscation(asym6(Namespace::V2)));
  std::set<std::vector<VertexLabel>> seen;
  for (std::uint64_t s = 0; s < 20; ++s) seen.insert(random_baseline_scheme(s).nominate(g1, og2, kV).order());
  EXPECT_GT(seen.size(), 10u);
}

TEST(GmScheme, IdenticalAsymmetricGraphsRankTruthFirst) {
  Rng rng({43, 0});
  for (int t = 0; t < 5; ++t) {
    auto g1 = sample_asymmetric([](Rng& r) { return sample_er(8, 0.5, r); }, rng);
    NominatablePair pair(g1, with_labels(g1, sequential_labels(8, Namespace::V2)), 8);
    for (std::uint64_t v = 1; v <= 8; ++v) {
      const VertexLabel vs{Namespace::V1, v};
      EXPECT_EQ(rank_of_truth(gm_scheme({GmMode::Exact}), pair, shuffled(pair.g2, rng), vs), 1u);
    }
  }
}

TEST(GmScheme, ExactRanksFollowPinnedObjective) {
  Rng rng({44, 0});
  auto [g1, g2] = sample_correlated_er(CorrelatedErParams::constant(7, 0.5, 0.3), rng);
  const auto order = gm_ranking(g1, g2, 0, {GmMode::Exact});
  EXPECT_EQ(order.front(), exact_match(g1, g2).permutation(0));
  for (std::size_t r = 2; r < order.size(); ++r)
    EXPECT_LE(exact_match_pinned(g1, g2, 0, order[r - 1]).objective, exact_match_pinned(g1, g2, 0, order[r]).objective);
  EXPECT_THROW(gm_ranking(g1, make_graph(6, {}), 0, {}), InvalidInput);
}

TEST(Reversal, InvertsRanks) {
  Rng rng({45, 0});
  auto g1 = asym6();
  auto g2 = asym6(Namespace::V2);
  auto og2 = apply_obfuscation(g2, shuffled(g2, rng));
  auto base = gm_scheme({GmMode::Exact});
  auto rev = reversal_scheme(base);
  const auto a = base.nominate(g1, og2, kV), b = rev.nominate(g1, og2, kV);
  for (const auto& w : og2.labels()) EXPECT_EQ(a.rank(w) + b.rank(w), 7u);
  EXPECT_TRUE(rev.has_positional());
}

TEST(FeatureScheme, NearestFeatureGroupComesFirst) {
  auto base = make_graph(6, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 5}, {4, 6}});
  const std::vector<FeatureRow> f{{1.0}, {0.0}, {1.0}, {0.0}, {2.0}, {0.0}};
  auto g1 = with_features(base, f);
  auto g2 = with_features(with_labels(base, sequential_labels(6, Namespace::V2)), f);
  Rng rng({46, 0});
  const auto scheme = feature_scheme(random_baseline_scheme(3));
  for (int t = 0; t < 5; ++t) {
    auto o = shuffled(g2, rng);
    const auto list = scheme.nominate(g1, apply_obfuscation(g2, o), kV);
    std::set<VertexLabel> top{list[1], list[2]};
    EXPECT_EQ(top, (std::set<VertexLabel>{o({Namespace::V2, 1}), o({Namespace::V2, 3})}));
    EXPECT_EQ(list[6], o({Namespace::V2, 5}));
  }
}

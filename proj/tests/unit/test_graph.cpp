#include <gtest/gtest.h>

#include <sstream>

#include "vnlab/edgelist.hpp"
#include "vnlab/graph.hpp"
#include "vnlab/models.hpp"
#include "vnlab/obfuscation.hpp"
#include "vnlab/rng.hpp"

using namespace vnlab;

namespace {

std::vector<std::size_t> degrees(const LabeledGraph& g) {
  std::vector<std::size_t> d;
  for (std::size_t i = 0; i < g.order(); ++i) d.push_back(g.degree(i));
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST(MakeGraph, PathEmptyAndCollapse) {
  auto path = make_graph(3, {{1, 2}, {2, 3}});
  EXPECT_EQ(path.order(), 3u);
  EXPECT_EQ(path.edge_count(), 2u);
  EXPECT_TRUE(path.has_edge(0, 1));
  EXPECT_TRUE(path.has_edge(2, 1));
  EXPECT_FALSE(path.has_edge(0, 2));
  EXPECT_EQ(make_graph(4, {}).edge_count(), 0u);
  auto one = make_graph(4, {{1, 2}, {2, 1}});
  EXPECT_EQ(one.edge_count(), 1u);
}

TEST(MakeGraph, RejectsBadEndpoints) {
  EXPECT_THROW(make_graph(3, {{2, 2}}), InvalidInput);
  EXPECT_THROW(make_graph(3, {{0, 1}}), InvalidInput);
  EXPECT_THROW(make_graph(3, {{1, 4}}), InvalidInput);
}

TEST(LabeledGraph, RejectsDuplicateLabels) {
  EXPECT_THROW(LabeledGraph({{Namespace::V1, 1}, {Namespace::V1, 1}}, AdjacencyBits(2)), InvalidInput);
  EXPECT_THROW(LabeledGraph(sequential_labels(2, Namespace::V1), AdjacencyBits(2), {{1.0}}), InvalidInput);
}

TEST(AdjacencyBits, SlotLayoutIsColumnMajor) {
  EXPECT_EQ(AdjacencyBits::slot(0, 1), 0u);
  EXPECT_EQ(AdjacencyBits::slot(0, 2), 1u);
  EXPECT_EQ(AdjacencyBits::slot(1, 2), 2u);
  EXPECT_EQ(AdjacencyBits::slot(3, 0), 3u);
  AdjacencyBits b(70);
  b.set(68, 69);
  EXPECT_TRUE(b.test(69, 68));
  EXPECT_EQ(b.count(), 1u);
}

TEST(InducedSubgraph, Examples) {
  auto tri = make_graph(3, {{1, 2}, {2, 3}, {1, 3}});
  std::vector<VertexLabel> s12{{Namespace::V1, 1}, {Namespace::V1, 2}};
  EXPECT_EQ(induced_subgraph(tri, s12).edge_count(), 1u);
  EXPECT_EQ(induced_subgraph(tri, tri.labels()), tri);
  auto path = make_graph(3, {{1, 2}, {2, 3}});
  std::vector<VertexLabel> s13{{Namespace::V1, 1}, {Namespace::V1, 3}};
  auto sub = induced_subgraph(path, s13);
  EXPECT_EQ(sub.order(), 2u);
  EXPECT_EQ(sub.edge_count(), 0u);
  std::vector<VertexLabel> bad{{Namespace::V1, 9}};
  EXPECT_THROW(induced_subgraph(path, bad), InvalidInput);
}

TEST(InducedSubgraph, NeverAddsEdges) {
  Rng rng({5, 0});
  for (int t = 0; t < 50; ++t) {
    auto g = sample_er(10, 0.5, rng);
    std::vector<VertexLabel> s;
    for (const auto& l : g.labels())
      if (rng.bernoulli(0.5)) s.push_back(l);
    EXPECT_LE(induced_subgraph(g, s).edge_count(), g.edge_count());
  }
}

TEST(Obfuscation, RelabelsAndRoundTrips) {
  auto g = make_graph(2, {{1, 2}}, Namespace::V2);
  auto o = make_obfuscation(g.labels(), {7, 3});
  auto og = apply_obfuscation(g, o);
  EXPECT_TRUE(og.has_edge(*og.index_of({Namespace::W, 7}), *og.index_of({Namespace::W, 3})));
  EXPECT_EQ(og.label(0), (VertexLabel{Namespace::W, 3}));
  EXPECT_EQ(remove_obfuscation(og, o), g);

  auto empty = make_graph(3, {}, Namespace::V2);
  auto oe = apply_obfuscation(empty, positional_obfuscation(empty));
  for (const auto& l : oe.labels()) EXPECT_EQ(l.ns, Namespace::W);
  EXPECT_EQ(oe.edge_count(), 0u);
}

TEST(Obfuscation, CarriesFeaturesAndPreservesDegrees) {
  Rng rng({11, 0});
  for (int t = 0; t < 30; ++t) {
    auto g = sample_er(9, 0.4, rng, Namespace::V2);
    std::vector<FeatureRow> f;
    for (std::size_t i = 0; i < g.order(); ++i) f.push_back({static_cast<double>(i)});
    g = with_features(g, f);
    std::vector<std::uint64_t> ids(9);
    auto perm = rng.permutation(9);
    for (std::size_t i = 0; i < 9; ++i) ids[i] = 100 + perm[i];
    auto o = make_obfuscation(g.labels(), ids);
    auto og = apply_obfuscation(g, o);
    EXPECT_EQ(og.edge_count(), g.edge_count());
    EXPECT_EQ(degrees(og), degrees(g));
    for (std::size_t i = 0; i < g.order(); ++i) {
      auto j = og.require_index(o(g.label(i)));
      EXPECT_EQ(og.feature(j), g.feature(i));
      EXPECT_EQ(og.degree(j), g.degree(i));
    }
    EXPECT_EQ(remove_obfuscation(og, o), g);
  }
}

TEST(Obfuscation, RejectsMismatchedDomain) {
  auto g = make_graph(2, {{1, 2}}, Namespace::V2);
  auto o = make_obfuscation(sequential_labels(3, Namespace::V2), {1, 2, 3});
  EXPECT_THROW(apply_obfuscation(g, o), InvalidInput);
  EXPECT_THROW(make_obfuscation(g.labels(), {1, 1}), InvalidInput);
}

TEST(Permute, Examples) {
  auto path = make_graph(3, {{1, 2}, {2, 3}});
  Permutation swap13({2, 1, 0});
  EXPECT_EQ(permute(path, swap13), path);
  auto star = make_graph(4, {{1, 2}, {1, 3}, {1, 4}});
  Permutation move({1, 0, 2, 3});
  auto moved = permute(star, move);
  EXPECT_EQ(moved.degree(1), 3u);
  EXPECT_EQ(moved.degree(0), 1u);
  EXPECT_EQ(permute(path, Permutation::identity(3)), path);
  EXPECT_THROW(permute(path, Permutation::identity(4)), InvalidInput);
}

TEST(Permute, GroupActionLaw) {
  Rng rng({3, 1});
  for (int t = 0; t < 100; ++t) {
    auto g = sample_er(8, 0.5, rng);
    Permutation s(rng.permutation(8)), u(rng.permutation(8));
    EXPECT_EQ(permute(g, compose(s, u)), permute(permute(g, u), s));
    EXPECT_EQ(permute(permute(g, s), s.inverse()), g);
  }
}

TEST(Permutation, RejectsNonBijection) {
  EXPECT_THROW(Permutation({0, 0}), InvalidInput);
  EXPECT_THROW(Permutation({0, 2}), InvalidInput);
  EXPECT_TRUE(compose(Permutation({1, 2, 0}), Permutation({1, 2, 0}).inverse()).is_identity());
}

TEST(EdgeList, ReadWriteRoundTrip) {
  std::istringstream in("3 2\n1 2\n2 3\n");
  auto g = read_edgelist(in);
  EXPECT_EQ(g, make_graph(3, {{1, 2}, {2, 3}}));
  Rng rng({1, 2});
  for (int t = 0; t < 20; ++t) {
    auto h = sample_er(12, 0.3, rng);
    std::ostringstream out;
    write_edgelist(h, out);
    std::istringstream back(out.str());
    auto h2 = read_edgelist(back);
    EXPECT_EQ(h2, h);
    std::ostringstream again;
    write_edgelist(h2, again);
    EXPECT_EQ(again.str(), out.str());
  }
}

TEST(EdgeList, ParseErrorsCarryLineNumbers) {
  auto fails_at = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_edgelist(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(fails_at("3 2\n1 2\n2 2\n"), 3u);
  EXPECT_EQ(fails_at("x\n"), 1u);
  EXPECT_EQ(fails_at("3 1\n1 4\n"), 2u);
  EXPECT_EQ(fails_at("3 1\n1 2 3\n"), 2u);
  EXPECT_EQ(fails_at("3 2\n1 2\n"), 3u);
}

TEST(EdgeList, FeatureSidecarRoundTrip) {
  auto g = with_features(make_graph(2, {{1, 2}}), {{0.25, -1.5}, {3.0, 1e-7}});
  std::ostringstream out;
  write_features(g, out);
  std::istringstream in(out.str());
  EXPECT_EQ(read_features(in), g.features());
  std::istringstream bad("2 2\n1 2\n3\n");
  EXPECT_THROW(read_features(bad), ParseError);
}

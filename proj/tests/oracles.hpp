#pragma once

// Brute-force reference implementations used only by the tests. They share
// nothing with the library beyond the graph container.

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "vnlab/graph.hpp"
#include "vnlab/rational.hpp"

namespace oracle {

using vnlab::LabeledGraph;

inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// p maps g positions onto h positions and preserves edges and features.
inline bool preserves(const LabeledGraph& g, const LabeledGraph& h, const std::vector<std::size_t>& p) {
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (g.has_features() && g.feature(i) != h.feature(p[i])) return false;
    for (std::size_t j = i + 1; j < g.order(); ++j)
      if (g.has_edge(i, j) != h.has_edge(p[i], p[j])) return false;
  }
  return true;
}

inline std::vector<std::vector<std::size_t>> automorphisms(const LabeledGraph& g) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& p : all_permutations(g.order()))
    if (preserves(g, g, p)) out.push_back(p);
  return out;
}

/// Orbits as sets of positions.
inline std::set<std::set<std::size_t>> orbits(const LabeledGraph& g) {
  const auto autos = automorphisms(g);
  std::set<std::set<std::size_t>> out;
  for (std::size_t i = 0; i < g.order(); ++i) {
    std::set<std::size_t> o;
    for (const auto& a : autos) o.insert(a[i]);
    out.insert(o);
  }
  return out;
}

inline bool isomorphic(const LabeledGraph& g, const LabeledGraph& h) {
  if (g.order() != h.order()) return false;
  for (const auto& p : all_permutations(g.order()))
    if (preserves(g, h, p)) return true;
  return false;
}

inline Eigen::MatrixXd adjacency(const LabeledGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && g.has_edge(i, j)) A(i, j) = 1;
  return A;
}

/// ||AQ - QB||_F with Q(i, p(i)) = 1, computed with dense matrices.
inline double delta(const LabeledGraph& a, const LabeledGraph& b, const std::vector<std::size_t>& p) {
  const auto n = static_cast<Eigen::Index>(a.order());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) Q(i, static_cast<Eigen::Index>(p[i])) = 1;
  return (adjacency(a) * Q - Q * adjacency(b)).norm();
}

/// All minimizers of delta and the minimum.
inline std::pair<double, std::vector<std::vector<std::size_t>>> argmin_delta(const LabeledGraph& a, const LabeledGraph& b) {
  double best = 1e300;
  std::vector<std::vector<std::size_t>> arg;
  for (const auto& p : all_permutations(a.order())) {
    const double d = delta(a, b, p);
    if (d < best - 1e-9) {
      best = d;
      arg.assign(1, p);
    } else if (std::abs(d - best) <= 1e-9) {
      arg.push_back(p);
    }
  }
  return {best, arg};
}

struct WeightedPair {
  LabeledGraph g1, g2;
  vnlab::Rational mass;
};

/// P[w = o(v*) | g1, og2] by summing, over support pairs with the same g1,
/// the mass of every structure-preserving map from g2 onto og2, split evenly
/// across the maps of each pair.
inline std::map<vnlab::VertexLabel, vnlab::Rational> conditionals(const std::vector<WeightedPair>& support,
                                                                 std::uint64_t v_star_id, const LabeledGraph& g1,
                                                                 const LabeledGraph& og2) {
  std::map<vnlab::VertexLabel, vnlab::Rational> out;
  for (const auto& l : og2.labels()) out[l] = 0;
  vnlab::Rational total = 0;
  for (const auto& s : support) {
    if (!(s.g1 == g1) || s.g2.order() != og2.order()) continue;
    const std::size_t u = s.g2.require_index({vnlab::Namespace::V2, v_star_id});
    std::vector<std::size_t> hits;
    for (const auto& p : all_permutations(og2.order()))
      if (preserves(s.g2, og2, p)) hits.push_back(p[u]);
    if (hits.empty()) continue;
    total += s.mass;
    for (auto h : hits) out[og2.label(h)] += s.mass / vnlab::Rational(static_cast<long long>(hits.size()));
  }
  for (auto& [_, v] : out) v /= total;
  return out;
}

}  // namespace oracle

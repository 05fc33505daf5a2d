#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vnlab/graph.hpp"
#include "vnlab/iso.hpp"
#include "vnlab/rng.hpp"

namespace vnlab {

// ------------------------------------------------------ nominatable pair --

/// (g1, g2) with a shared core: the first c vertices of each graph carry the
/// same ids (namespaces V1 and V2). Vertex u of g2 corresponds to the vertex
/// of g1 with the same id.
struct NominatablePair {
  LabeledGraph g1;
  LabeledGraph g2;
  std::size_t core_size = 0;
  std::string theta;

  NominatablePair() = default;
  NominatablePair(LabeledGraph a, LabeledGraph b, std::size_t c, std::string th = {})
      : g1(std::move(a)), g2(std::move(b)), core_size(c), theta(std::move(th)) {
    validate();
  }

  void validate() const {
    if (core_size > std::min(g1.order(), g2.order())) throw InvalidInput("core size exceeds graph order");
    for (const auto& l : g1.labels())
      if (l.ns != Namespace::V1) throw InvalidInput("g1 labels must lie in V1");
    for (const auto& l : g2.labels())
      if (l.ns != Namespace::V2) throw InvalidInput("g2 labels must lie in V2");
    for (std::size_t i = 0; i < core_size; ++i)
      if (g1.label(i).id != g2.label(i).id) throw InvalidInput("core labels of g1 and g2 must coincide");
    std::set<std::uint64_t> junk1;
    for (std::size_t i = core_size; i < g1.order(); ++i) junk1.insert(g1.label(i).id);
    for (std::size_t i = 0; i < g2.order(); ++i) {
      const auto id = g2.label(i).id;
      if (i >= core_size && junk1.count(id)) throw InvalidInput("junk sets of g1 and g2 must be disjoint");
      if (i >= core_size && std::any_of(g1.labels().begin(), g1.labels().begin() + core_size,
                                        [&](const VertexLabel& l) { return l.id == id; }))
        throw InvalidInput("junk vertex of g2 collides with a core id");
    }
  }

  bool in_core(VertexLabel v1) const {
    for (std::size_t i = 0; i < core_size; ++i)
      if (g1.label(i) == v1) return true;
    return false;
  }

  /// The g2 vertex corresponding to core vertex v1.
  VertexLabel counterpart(VertexLabel v1) const {
    if (!in_core(v1)) throw InvalidInput(to_string(v1) + " is not a core vertex");
    return {Namespace::V2, v1.id};
  }
};

// --------------------------------------------------------------- samplers --

namespace detail {

inline void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput(std::string(what) + " must lie in [0, 1]");
}

inline void require_symmetric(const Eigen::MatrixXd& M, const char* what) {
  if (M.rows() != M.cols()) throw InvalidInput(std::string(what) + " must be square");
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = i + 1; j < M.cols(); ++j)
      if (M(i, j) != M(j, i)) throw InvalidInput(std::string(what) + " must be symmetric");
}

}  // namespace detail

inline LabeledGraph sample_er(std::size_t n, double p, Rng& rng, Namespace ns = Namespace::V1) {
  detail::require_probability(p, "p");
  AdjacencyBits adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) adj.set(i, j);
  return LabeledGraph(sequential_labels(n, ns), std::move(adj));
}

inline LabeledGraph sample_er_matrix(const Eigen::MatrixXd& P, Rng& rng, Namespace ns = Namespace::V1) {
  detail::require_symmetric(P, "P");
  const auto n = static_cast<std::size_t>(P.rows());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) detail::require_probability(P(i, j), "P entries");
  AdjacencyBits adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(P(i, j))) adj.set(i, j);
  return LabeledGraph(sequential_labels(n, ns), std::move(adj));
}

/// Block memberships are 0-based.
struct SbmParams {
  Eigen::MatrixXd B;
  std::vector<std::size_t> b;

  std::size_t blocks() const { return static_cast<std::size_t>(B.rows()); }

  void validate() const {
    detail::require_symmetric(B, "B");
    for (Eigen::Index i = 0; i < B.rows(); ++i)
      for (Eigen::Index j = 0; j < B.cols(); ++j) detail::require_probability(B(i, j), "B entries");
    for (auto x : b)
      if (x >= blocks()) throw InvalidInput("block membership out of range");
  }

  Eigen::MatrixXd edge_probabilities() const {
    const auto n = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXd P(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) P(i, j) = i == j ? 0.0 : B(b[i], b[j]);
    return P;
  }
};

/// Contiguous blocks of the given sizes.
inline std::vector<std::size_t> contiguous_blocks(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> b;
  for (std::size_t k = 0; k < sizes.size(); ++k) b.insert(b.end(), sizes[k], k);
  return b;
}

inline LabeledGraph sample_sbm(const SbmParams& params, Rng& rng, Namespace ns = Namespace::V1) {
  params.validate();
  return sample_er_matrix(params.edge_probabilities(), rng, ns);
}

inline LabeledGraph sample_rdpg(const Eigen::MatrixXd& X, Rng& rng, Namespace ns = Namespace::V1) {
  Eigen::MatrixXd P = X * X.transpose();
  constexpr double slack = 1e-12;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      if (i == j) {
        P(i, j) = 0.0;
        continue;
      }
      if (P(i, j) < -slack || P(i, j) > 1.0 + slack) throw InvalidInput("latent positions give XX^T outside [0, 1]");
      P(i, j) = std::clamp(P(i, j), 0.0, 1.0);
    }
  return sample_er_matrix(P, rng, ns);
}

struct CorrelatedErParams {
  Eigen::MatrixXd P;
  Eigen::MatrixXd R;

  static CorrelatedErParams constant(std::size_t n, double p, double rho) {
    const auto m = static_cast<Eigen::Index>(n);
    return {Eigen::MatrixXd::Constant(m, m, p), Eigen::MatrixXd::Constant(m, m, rho)};
  }

  /// Closed interval of admissible correlations for marginal p.
  static std::pair<double, double> feasible_range(double p) {
    if (p <= 0.0 || p >= 1.0) return {-1.0, 1.0};
    return {std::max(-p / (1.0 - p), -(1.0 - p) / p), 1.0};
  }

  void validate() const {
    detail::require_symmetric(P, "P");
    detail::require_symmetric(R, "R");
    if (P.rows() != R.rows()) throw InvalidInput("P and R must have the same size");
    for (Eigen::Index i = 0; i < P.rows(); ++i)
      for (Eigen::Index j = i + 1; j < P.cols(); ++j) {
        detail::require_probability(P(i, j), "P entries");
        auto [lo, hi] = feasible_range(P(i, j));
        if (!(R(i, j) >= lo - 1e-15 && R(i, j) <= hi))
          throw InvalidInput("correlation R(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") outside the feasible range");
      }
  }
};

/// G1 in namespace V1, G2 in V2, ids 1..n, identity correspondence.
inline std::pair<LabeledGraph, LabeledGraph> sample_correlated_er(const CorrelatedErParams& params, Rng& rng) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.P.rows());
  AdjacencyBits a(n), b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = params.P(i, j), r = params.R(i, j);
      const bool ea = rng.bernoulli(p);
      const double q = ea ? p + r * (1.0 - p) : p * (1.0 - r);
      const bool eb = rng.bernoulli(std::clamp(q, 0.0, 1.0));
      if (ea) a.set(i, j);
      if (eb) b.set(i, j);
    }
  return {LabeledGraph(sequential_labels(n, Namespace::V1), std::move(a)),
          LabeledGraph(sequential_labels(n, Namespace::V2), std::move(b))};
}

/// Redraw until the sample has trivial automorphism group.
template <class Sampler>
LabeledGraph sample_asymmetric(Sampler&& sampler, Rng& rng, std::size_t max_tries = 10000) {
  for (std::size_t t = 0; t < max_tries; ++t) {
    LabeledGraph g = sampler(rng);
    if (is_asymmetric(g)) return g;
  }
  throw InvalidInput("no asymmetric sample within the retry budget");
}

// --------------------------------------------------- one-graph encoding --

/// Seeded one-graph instance as a pair. blocks[i] is the 0-based block of
/// vertex position i; seeds[k] lists the seed labels of block k.
/// g1 = g plus one label vertex per block joined to that block's seeds;
/// g2 = g restricted to the nonseeds. The core is the nonseed set.
inline NominatablePair encode_one_graph_instance(const LabeledGraph& g, const std::vector<std::size_t>& blocks,
                                                 const std::vector<std::vector<VertexLabel>>& seeds) {
  if (blocks.size() != g.order()) throw InvalidInput("blocks must assign every vertex");
  const std::size_t K = seeds.size();
  for (auto b : blocks)
    if (b >= K) throw InvalidInput("block index has no seed list");
  std::vector<int> seed_block(g.order(), -1);
  for (std::size_t k = 0; k < K; ++k)
    for (const auto& s : seeds[k]) {
      const std::size_t i = g.require_index(s);
      if (seed_block[i] != -1) throw InvalidInput("seed sets overlap at " + to_string(s));
      if (blocks[i] != k) throw InvalidInput("seed " + to_string(s) + " is not in its block");
      seed_block[i] = static_cast<int>(k);
    }
  std::vector<std::size_t> nonseed, seed;
  std::uint64_t max_id = 0;
  for (std::size_t i = 0; i < g.order(); ++i) {
    (seed_block[i] == -1 ? nonseed : seed).push_back(i);
    max_id = std::max(max_id, g.label(i).id);
  }
  const std::size_t c = nonseed.size(), n1 = g.order() + K;
  std::vector<std::size_t> layout = nonseed;
  layout.insert(layout.end(), seed.begin(), seed.end());

  std::vector<VertexLabel> labels;
  for (auto i : layout) labels.push_back({Namespace::V1, g.label(i).id});
  for (std::size_t k = 0; k < K; ++k) labels.push_back({Namespace::V1, max_id + k + 1});
  AdjacencyBits adj(n1);
  for (std::size_t a = 0; a < layout.size(); ++a)
    for (std::size_t b = a + 1; b < layout.size(); ++b)
      if (g.has_edge(layout[a], layout[b])) adj.set(a, b);
  for (std::size_t a = c; a < layout.size(); ++a) adj.set(a, g.order() + static_cast<std::size_t>(seed_block[layout[a]]));
  LabeledGraph g1(std::move(labels), std::move(adj));

  LabeledGraph core = induced_by_positions(g, nonseed);
  std::vector<VertexLabel> l2;
  for (const auto& l : core.labels()) l2.push_back({Namespace::V2, l.id});
  LabeledGraph g2 = with_labels(core, std::move(l2));
  return NominatablePair(std::move(g1), std::move(g2), c, "one-graph");
}

}  // namespace vnlab

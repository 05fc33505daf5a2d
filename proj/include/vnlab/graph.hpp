#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vnlab/errors.hpp"

namespace vnlab {

// ---------------------------------------------------------------- labels --

/// Which vertex set a label belongs to. Core vertices of a nominatable pair
/// carry the same id in V1 and V2; W is reserved for obfuscated labels.
enum class Namespace : std::uint8_t { V1 = 0, V2 = 1, W = 2 };

struct VertexLabel {
  Namespace ns = Namespace::V1;
  std::uint64_t id = 0;

  friend constexpr auto operator<=>(const VertexLabel&, const VertexLabel&) = default;
};

inline std::string to_string(VertexLabel l) {
  static constexpr char prefix[] = {'v', 'u', 'w'};
  return prefix[static_cast<int>(l.ns)] + std::to_string(l.id);
}

struct VertexLabelHash {
  std::size_t operator()(const VertexLabel& l) const noexcept {
    return std::hash<std::uint64_t>{}(l.id * 4 + static_cast<std::uint64_t>(l.ns));
  }
};

// ----------------------------------------------------------- permutation --

/// A bijection on vertex positions {0, ..., n-1}. Graph operations act on
/// positions; labels stay attached to positions.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (std::size_t x : image_) {
      if (x >= image_.size() || seen[x]) throw InvalidInput("permutation image is not a bijection");
      seen[x] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return Permutation(std::move(v));
  }

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t i) const { return image_.at(i); }
  std::span<const std::size_t> image() const noexcept { return image_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < image_.size(); ++i)
      if (image_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
    return Permutation(std::move(inv));
  }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

/// (outer ∘ inner)(i) = outer(inner(i)).
inline Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) throw InvalidInput("compose: permutation sizes differ");
  std::vector<std::size_t> v(inner.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = outer(inner(i));
  return Permutation(std::move(v));
}

// -------------------------------------------------------- adjacency bits --

/// Packed strict upper triangle of a symmetric 0/1 matrix with zero diagonal.
/// Pair {i, j} with i < j lives at bit j(j-1)/2 + i, so the bits of column j
/// are contiguous and columns are appended in vertex order.
class AdjacencyBits {
 public:
  AdjacencyBits() = default;
  explicit AdjacencyBits(std::size_t n) : n_(n), words_((pairs(n) + 63) / 64, 0) {}

  static constexpr std::size_t pairs(std::size_t n) noexcept { return n * (n - (n > 0)) / 2; }
  static constexpr std::size_t slot(std::size_t i, std::size_t j) noexcept {
    if (i > j) std::swap(i, j);
    return j * (j - 1) / 2 + i;
  }

  std::size_t order() const noexcept { return n_; }

  bool test(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return false;
    const std::size_t s = slot(i, j);
    return (words_[s >> 6] >> (s & 63)) & 1u;
  }

  void set(std::size_t i, std::size_t j, bool value = true) noexcept {
    const std::size_t s = slot(i, j);
    const std::uint64_t mask = std::uint64_t{1} << (s & 63);
    if (value)
      words_[s >> 6] |= mask;
    else
      words_[s >> 6] &= ~mask;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const AdjacencyBits&, const AdjacencyBits&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// --------------------------------------------------------- labeled graph --

using FeatureRow = std::vector<double>;

/// Hollow undirected graph on explicitly labeled vertices, with optional
/// per-vertex feature vectors. Immutable once built.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  LabeledGraph(std::vector<VertexLabel> labels, AdjacencyBits adjacency,
               std::vector<FeatureRow> features = {})
      : labels_(std::move(labels)), adj_(std::move(adjacency)), features_(std::move(features)) {
    if (adj_.order() != labels_.size()) throw InvalidInput("adjacency order does not match label count");
    std::vector<VertexLabel> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidInput("duplicate vertex label");
    if (!features_.empty()) {
      if (features_.size() != labels_.size()) throw InvalidInput("feature rows must match vertex count");
      for (const auto& row : features_)
        if (row.size() != features_.front().size()) throw InvalidInput("feature rows differ in dimension");
    }
    if (labels_.size() > 32) {
      index_.reserve(labels_.size());
      for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
    }
  }

  std::size_t order() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return adj_.count(); }
  const std::vector<VertexLabel>& labels() const noexcept { return labels_; }
  const VertexLabel& label(std::size_t i) const { return labels_.at(i); }
  const AdjacencyBits& adjacency() const noexcept { return adj_; }
  bool has_edge(std::size_t i, std::size_t j) const noexcept { return adj_.test(i, j); }

  std::optional<std::size_t> index_of(VertexLabel l) const {
    if (!index_.empty()) {
      auto it = index_.find(l);
      if (it == index_.end()) return std::nullopt;
      return it->second;
    }
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == l) return i;
    return std::nullopt;
  }

  std::size_t require_index(VertexLabel l) const {
    auto i = index_of(l);
    if (!i) throw InvalidInput("unknown vertex label " + to_string(l));
    return *i;
  }

  std::size_t degree(std::size_t i) const noexcept {
    std::size_t d = 0;
    for (std::size_t j = 0; j < order(); ++j) d += adj_.test(i, j);
    return d;
  }

  std::vector<std::size_t> neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < order(); ++j)
      if (adj_.test(i, j)) out.push_back(j);
    return out;
  }

  bool has_features() const noexcept { return !features_.empty(); }
  std::size_t feature_dim() const noexcept { return features_.empty() ? 0 : features_.front().size(); }
  const std::vector<FeatureRow>& features() const noexcept { return features_; }
  const FeatureRow& feature(std::size_t i) const { return features_.at(i); }

  /// Equality of the underlying labeled graphs: same label set, same edges
  /// between labels, same features per label. Vertex layout order is ignored.
  friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.order() != b.order() || a.has_features() != b.has_features()) return false;
    if (a.labels_ == b.labels_) return a.adj_ == b.adj_ && a.features_ == b.features_;
    std::vector<std::size_t> to_b(a.order());
    for (std::size_t i = 0; i < a.order(); ++i) {
      auto j = b.index_of(a.labels_[i]);
      if (!j) return false;
      to_b[i] = *j;
    }
    for (std::size_t i = 0; i < a.order(); ++i) {
      if (a.has_features() && a.features_[i] != b.features_[to_b[i]]) return false;
      for (std::size_t j = i + 1; j < a.order(); ++j)
        if (a.adj_.test(i, j) != b.adj_.test(to_b[i], to_b[j])) return false;
    }
    return true;
  }

 private:
  std::vector<VertexLabel> labels_;
  AdjacencyBits adj_;
  std::vector<FeatureRow> features_;
  std::unordered_map<VertexLabel, std::size_t, VertexLabelHash> index_;
};

/// Same vertex count, adjacency and features position by position; labels ignored.
inline bool same_structure(const LabeledGraph& a, const LabeledGraph& b) {
  return a.adjacency() == b.adjacency() && a.features() == b.features();
}

/// Labels {ns:1, ..., ns:n}.
inline std::vector<VertexLabel> sequential_labels(std::size_t n, Namespace ns, std::uint64_t first_id = 1) {
  std::vector<VertexLabel> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {ns, first_id + i};
  return out;
}

/// Same structure, new labels (position by position).
inline LabeledGraph with_labels(const LabeledGraph& g, std::vector<VertexLabel> labels) {
  if (labels.size() != g.order()) throw InvalidInput("with_labels: label count mismatch");
  return LabeledGraph(std::move(labels), g.adjacency(), g.features());
}

inline LabeledGraph with_features(const LabeledGraph& g, std::vector<FeatureRow> features) {
  return LabeledGraph(g.labels(), g.adjacency(), std::move(features));
}

// ------------------------------------------------------------ operations --

/// Graph on labels 1..n of namespace `ns`; endpoints are 1-based.
inline LabeledGraph make_graph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                               Namespace ns = Namespace::V1) {
  AdjacencyBits adj(n);
  for (auto [u, v] : edges) {
    if (u < 1 || v < 1 || u > n || v > n)
      throw InvalidInput("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
    if (u == v) throw InvalidInput("self-loop at vertex " + std::to_string(u));
    adj.set(u - 1, v - 1);
  }
  return LabeledGraph(sequential_labels(n, ns), std::move(adj));
}

inline LabeledGraph make_graph(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> edges,
                               Namespace ns = Namespace::V1) {
  std::vector<std::pair<std::size_t, std::size_t>> e(edges);
  return make_graph(n, std::span<const std::pair<std::size_t, std::size_t>>(e), ns);
}

/// Subgraph induced by the positions in `keep`, in the given order.
inline LabeledGraph induced_by_positions(const LabeledGraph& g, std::span<const std::size_t> keep) {
  std::vector<VertexLabel> labels;
  std::vector<FeatureRow> features;
  AdjacencyBits adj(keep.size());
  labels.reserve(keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    labels.push_back(g.label(keep[a]));
    if (g.has_features()) features.push_back(g.feature(keep[a]));
    for (std::size_t b = 0; b < a; ++b)
      if (g.has_edge(keep[a], keep[b])) adj.set(a, b);
  }
  return LabeledGraph(std::move(labels), std::move(adj), std::move(features));
}

/// G[S]; vertices keep their relative order in g.
inline LabeledGraph induced_subgraph(const LabeledGraph& g, std::span<const VertexLabel> subset) {
  std::vector<bool> pick(g.order(), false);
  for (const auto& l : subset) pick[g.require_index(l)] = true;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < g.order(); ++i)
    if (pick[i]) keep.push_back(i);
  return induced_by_positions(g, keep);
}

/// Conjugate the adjacency by sigma: edge {i, j} becomes {sigma(i), sigma(j)}
/// and the feature row of i moves to sigma(i). The label list is unchanged.
inline LabeledGraph permute(const LabeledGraph& g, const Permutation& sigma) {
  if (sigma.size() != g.order()) throw InvalidInput("permute: permutation size does not match graph order");
  const std::size_t n = g.order();
  AdjacencyBits adj(n);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (g.has_edge(i, j)) adj.set(sigma(i), sigma(j));
  std::vector<FeatureRow> features;
  if (g.has_features()) {
    features.resize(n);
    for (std::size_t i = 0; i < n; ++i) features[sigma(i)] = g.feature(i);
  }
  return LabeledGraph(g.labels(), std::move(adj), std::move(features));
}

/// Graph laid out so that new position p holds old vertex order[p].
inline LabeledGraph reorder(const LabeledGraph& g, std::span<const std::size_t> order) {
  if (order.size() != g.order()) throw InvalidInput("reorder: size mismatch");
  return induced_by_positions(g, order);
}

}  // namespace vnlab

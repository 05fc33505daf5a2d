#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "vnlab/graph.hpp"

namespace vnlab {

inline constexpr std::size_t kDefaultEnumerationCap = 8;

// --------------------------------------------------------------- helpers --

/// Byte string identifying adjacency and features position by position.
/// Equal keys <=> same_structure.
inline std::string structure_key(const LabeledGraph& g) {
  std::string key;
  const auto words = g.adjacency().words();
  key.reserve(8 + words.size() * 8 + g.order() * g.feature_dim() * 8);
  const std::uint64_t n = g.order();
  key.append(reinterpret_cast<const char*>(&n), sizeof n);
  key.append(reinterpret_cast<const char*>(words.data()), words.size() * sizeof(std::uint64_t));
  for (const auto& row : g.features())
    key.append(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double));
  return key;
}

namespace detail {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

/// Stable color refinement run jointly over several graphs, so that equal
/// colors are comparable across them. Initial colors come from (features,
/// degree); colors are ranks of sorted signatures, hence invariant under
/// relabeling.
inline std::vector<std::vector<std::uint32_t>> refine_colors(const std::vector<const LabeledGraph*>& graphs) {
  std::vector<std::vector<std::uint32_t>> colors(graphs.size());
  std::map<std::vector<double>, std::uint32_t> feature_rank;
  for (const auto* g : graphs)
    for (std::size_t i = 0; i < g->order(); ++i) feature_rank.emplace(g->has_features() ? g->feature(i) : FeatureRow{}, 0);
  std::uint32_t r = 0;
  for (auto& [_, v] : feature_rank) v = r++;

  std::vector<std::vector<std::vector<std::size_t>>> nbrs(graphs.size());
  std::map<std::vector<std::uint32_t>, std::uint32_t> ranks;
  std::vector<std::vector<std::vector<std::uint32_t>>> sig(graphs.size());
  for (std::size_t t = 0; t < graphs.size(); ++t) {
    const auto& g = *graphs[t];
    nbrs[t].resize(g.order());
    sig[t].resize(g.order());
    for (std::size_t i = 0; i < g.order(); ++i) {
      nbrs[t][i] = g.neighbors(i);
      sig[t][i] = {feature_rank[g.has_features() ? g.feature(i) : FeatureRow{}],
                   static_cast<std::uint32_t>(nbrs[t][i].size())};
      ranks.emplace(sig[t][i], 0);
    }
  }
  std::size_t distinct = 0;
  for (;;) {
    std::uint32_t next = 0;
    for (auto& [_, v] : ranks) v = next++;
    for (std::size_t t = 0; t < graphs.size(); ++t) {
      colors[t].resize(sig[t].size());
      for (std::size_t i = 0; i < sig[t].size(); ++i) colors[t][i] = ranks[sig[t][i]];
    }
    if (ranks.size() == distinct) break;
    distinct = ranks.size();
    ranks.clear();
    for (std::size_t t = 0; t < graphs.size(); ++t)
      for (std::size_t i = 0; i < sig[t].size(); ++i) {
        auto& s = sig[t][i];
        s.assign(1, colors[t][i]);
        for (std::size_t j : nbrs[t][i]) s.push_back(colors[t][j]);
        std::sort(s.begin() + 1, s.end());
        ranks.emplace(s, 0);
      }
  }
  return colors;
}

inline std::vector<std::uint32_t> refine_colors(const LabeledGraph& g) { return refine_colors({&g}).front(); }

inline bool is_discrete(const std::vector<std::uint32_t>& colors) {
  std::vector<std::uint32_t> c = colors;
  std::sort(c.begin(), c.end());
  return std::adjacent_find(c.begin(), c.end()) == c.end();
}

namespace detail {

/// Backtracking search for a structure- and feature-preserving bijection
/// g -> h that respects the given colors. Optionally pins pin.first -> pin.second.
class IsoSearch {
 public:
  IsoSearch(const LabeledGraph& g, const LabeledGraph& h, const std::vector<std::uint32_t>& cg,
            const std::vector<std::uint32_t>& ch)
      : g_(g), h_(h), cg_(cg), ch_(ch), n_(g.order()) {}

  std::optional<std::vector<std::size_t>> run(std::optional<std::pair<std::size_t, std::size_t>> pin = std::nullopt) {
    map_.assign(n_, kNone);
    used_.assign(n_, false);
    pin_ = pin;
    build_order(pin ? std::optional<std::size_t>(pin->first) : std::nullopt);
    if (dfs(0)) return map_;
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void build_order(std::optional<std::size_t> first) {
    std::map<std::uint32_t, std::size_t> class_size;
    for (auto c : cg_) ++class_size[c];
    order_.clear();
    std::vector<bool> placed(n_, false);
    std::vector<std::size_t> mapped_nbrs(n_, 0);
    for (std::size_t step = 0; step < n_; ++step) {
      std::size_t best = kNone;
      if (step == 0 && first) {
        best = *first;
      } else {
        for (std::size_t v = 0; v < n_; ++v) {
          if (placed[v]) continue;
          if (best == kNone || mapped_nbrs[v] > mapped_nbrs[best] ||
              (mapped_nbrs[v] == mapped_nbrs[best] && class_size[cg_[v]] < class_size[cg_[best]]))
            best = v;
        }
      }
      placed[best] = true;
      order_.push_back(best);
      for (std::size_t u = 0; u < n_; ++u)
        if (g_.has_edge(best, u)) ++mapped_nbrs[u];
    }
  }

  bool dfs(std::size_t k) {
    if (k == n_) return true;
    const std::size_t v = order_[k];
    for (std::size_t w = 0; w < n_; ++w) {
      if (used_[w] || ch_[w] != cg_[v]) continue;
      if (k == 0 && pin_ && w != pin_->second) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        const std::size_t u = order_[j];
        ok = g_.has_edge(u, v) == h_.has_edge(map_[u], w);
      }
      if (!ok) continue;
      map_[v] = w;
      used_[w] = true;
      if (dfs(k + 1)) return true;
      used_[w] = false;
      map_[v] = kNone;
    }
    return false;
  }

  const LabeledGraph& g_;
  const LabeledGraph& h_;
  const std::vector<std::uint32_t>& cg_;
  const std::vector<std::uint32_t>& ch_;
  std::size_t n_;
  std::vector<std::size_t> order_, map_;
  std::vector<bool> used_;
  std::optional<std::pair<std::size_t, std::size_t>> pin_;
};

inline bool same_color_multiset(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace detail

// ------------------------------------------------------------ operations --

/// Some sigma with same_structure(permute(g, sigma), h), if one exists.
/// Features, when present, must be carried onto equal features.
inline std::optional<Permutation> find_isomorphism(const LabeledGraph& g, const LabeledGraph& h) {
  if (g.order() != h.order() || g.edge_count() != h.edge_count() || g.has_features() != h.has_features() ||
      g.feature_dim() != h.feature_dim())
    return std::nullopt;
  auto colors = refine_colors({&g, &h});
  if (!detail::same_color_multiset(colors[0], colors[1])) return std::nullopt;
  detail::IsoSearch search(g, h, colors[0], colors[1]);
  auto m = search.run();
  if (!m) return std::nullopt;
  return Permutation(std::move(*m));
}

inline bool are_isomorphic(const LabeledGraph& g, const LabeledGraph& h) { return find_isomorphism(g, h).has_value(); }

/// Orbits of the automorphism group. When g carries features only
/// feature-preserving automorphisms count.
class OrbitPartition {
 public:
  OrbitPartition() = default;
  OrbitPartition(const LabeledGraph& g, std::vector<std::size_t> orbit_of) : orbit_of_(std::move(orbit_of)) {
    std::size_t count = 0;
    for (auto o : orbit_of_) count = std::max(count, o + 1);
    positions_.resize(count);
    labels_.resize(count);
    for (std::size_t i = 0; i < orbit_of_.size(); ++i) {
      positions_[orbit_of_[i]].push_back(i);
      labels_[orbit_of_[i]].push_back(g.label(i));
    }
  }

  std::size_t size() const noexcept { return positions_.size(); }
  std::size_t orbit_of(std::size_t position) const { return orbit_of_.at(position); }
  const std::vector<std::vector<std::size_t>>& positions() const noexcept { return positions_; }
  const std::vector<std::vector<VertexLabel>>& orbits() const noexcept { return labels_; }
  bool all_singletons() const noexcept { return positions_.size() == orbit_of_.size(); }

 private:
  std::vector<std::size_t> orbit_of_;
  std::vector<std::vector<std::size_t>> positions_;
  std::vector<std::vector<VertexLabel>> labels_;
};

inline OrbitPartition automorphism_orbits(const LabeledGraph& g) {
  const std::size_t n = g.order();
  const auto colors = refine_colors(g);
  detail::DisjointSets ds(n);
  if (!is_discrete(colors)) {
    detail::IsoSearch search(g, g, colors, colors);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (colors[i] != colors[j] || ds.find(i) == ds.find(j)) continue;
        if (auto sigma = search.run(std::pair{i, j}))
          for (std::size_t k = 0; k < n; ++k) ds.unite(k, (*sigma)[k]);
      }
  }
  std::vector<std::size_t> rep_index(n, static_cast<std::size_t>(-1)), orbit_of(n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = ds.find(i);
    if (rep_index[r] == static_cast<std::size_t>(-1)) rep_index[r] = next++;
    orbit_of[i] = rep_index[r];
  }
  return OrbitPartition(g, std::move(orbit_of));
}

inline bool is_asymmetric(const LabeledGraph& g) {
  const auto colors = refine_colors(g);
  if (is_discrete(colors)) return true;
  return automorphism_orbits(g).all_singletons();
}

// -------------------------------------------------------- canonical form --

struct CanonicalForm {
  /// Structure in canonical position order, labeled 1..n in namespace V1.
  LabeledGraph canonical_graph;
  /// Input position -> canonical position.
  Permutation witness;
  /// Lexicographically minimal code; equal codes <=> equal canonical graphs
  /// for graphs without features.
  std::vector<std::uint32_t> code;

  /// Canonical position p holds input vertex order()[p].
  std::vector<std::size_t> order() const {
    std::vector<std::size_t> o(witness.size());
    for (std::size_t i = 0; i < witness.size(); ++i) o[witness(i)] = i;
    return o;
  }

  std::string key() const { return structure_key(canonical_graph); }

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
    return same_structure(a.canonical_graph, b.canonical_graph);
  }
};

namespace detail {

/// Lex-min search over vertex sequences. Position k contributes the segment
/// [color(pi_k), adj(pi_0, pi_k), ..., adj(pi_{k-1}, pi_k)].
class CanonicalSearch {
 public:
  CanonicalSearch(const LabeledGraph& g, const std::vector<std::uint32_t>& colors) : g_(g), colors_(colors), n_(g.order()) {}

  std::vector<std::size_t> run() {
    seq_.clear();
    placed_.assign(n_, false);
    cur_.clear();
    best_.clear();
    best_seq_.clear();
    have_best_ = false;
    dfs(0);
    return best_seq_;
  }

  const std::vector<std::uint32_t>& code() const noexcept { return best_; }

 private:
  void segment(std::size_t v, std::vector<std::uint32_t>& out) const {
    out.clear();
    out.push_back(colors_[v]);
    for (std::size_t j = 0; j < seq_.size(); ++j) out.push_back(g_.has_edge(seq_[j], v) ? 1u : 0u);
  }

  bool prefix_worse() const {
    return std::lexicographical_compare(best_.begin(), best_.begin() + cur_.size(), cur_.begin(), cur_.end());
  }

  void dfs(std::size_t k) {
    if (k == n_) {
      if (!have_best_ || cur_ < best_) {
        best_ = cur_;
        best_seq_ = seq_;
        have_best_ = true;
      }
      return;
    }
    std::vector<std::uint32_t> seg, min_seg;
    std::vector<std::size_t> cands;
    for (std::size_t v = 0; v < n_; ++v) {
      if (placed_[v]) continue;
      segment(v, seg);
      if (cands.empty() || seg < min_seg) {
        min_seg = seg;
        cands.assign(1, v);
      } else if (seg == min_seg) {
        cands.push_back(v);
      }
    }
    const std::size_t mark = cur_.size();
    cur_.insert(cur_.end(), min_seg.begin(), min_seg.end());
    for (std::size_t v : cands) {
      if (have_best_ && prefix_worse()) break;
      placed_[v] = true;
      seq_.push_back(v);
      dfs(k + 1);
      seq_.pop_back();
      placed_[v] = false;
    }
    cur_.resize(mark);
  }

  const LabeledGraph& g_;
  const std::vector<std::uint32_t>& colors_;
  std::size_t n_;
  std::vector<std::size_t> seq_, best_seq_;
  std::vector<bool> placed_;
  std::vector<std::uint32_t> cur_, best_;
  bool have_best_ = false;
};

inline std::vector<std::uint32_t> code_of(const LabeledGraph& g, const std::vector<std::uint32_t>& colors,
                                          const std::vector<std::size_t>& seq) {
  std::vector<std::uint32_t> code;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    code.push_back(colors[seq[k]]);
    for (std::size_t j = 0; j < k; ++j) code.push_back(g.has_edge(seq[j], seq[k]) ? 1u : 0u);
  }
  return code;
}

inline CanonicalForm form_from_sequence(const LabeledGraph& g, const std::vector<std::size_t>& seq,
                                        std::vector<std::uint32_t> code) {
  std::vector<std::size_t> w(g.order());
  for (std::size_t p = 0; p < seq.size(); ++p) w[seq[p]] = p;
  Permutation witness(std::move(w));
  LabeledGraph canon = with_labels(permute(g, witness), sequential_labels(g.order(), Namespace::V1));
  return {std::move(canon), std::move(witness), std::move(code)};
}

}  // namespace detail

/// Canonical labeling: among vertex sequences that list refined color classes
/// in increasing order, the one whose adjacency code is lexicographically
/// smallest. Exact for every input; exponential only on large graphs with big
/// automorphism groups or refinement-resistant structure.
inline CanonicalForm canonical_form(const LabeledGraph& g) {
  const auto colors = refine_colors(g);
  std::vector<std::size_t> seq(g.order());
  std::iota(seq.begin(), seq.end(), std::size_t{0});
  if (is_discrete(colors)) {
    std::sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) { return colors[a] < colors[b]; });
    auto code = detail::code_of(g, colors, seq);
    return detail::form_from_sequence(g, seq, std::move(code));
  }
  detail::CanonicalSearch search(g, colors);
  seq = search.run();
  return detail::form_from_sequence(g, seq, search.code());
}

/// Color-refinement order with input position as the final tie-break. Cheap,
/// relabeling-invariant whenever refinement is discrete.
inline std::vector<std::size_t> structural_order(const LabeledGraph& g) {
  const auto colors = refine_colors(g);
  std::vector<std::size_t> seq(g.order());
  std::iota(seq.begin(), seq.end(), std::size_t{0});
  std::stable_sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) { return colors[a] < colors[b]; });
  return seq;
}

/// Every distinct graph permute(g, sigma), paired with the first sigma (in
/// lexicographic order of images) that produces it.
struct IsoClassMember {
  LabeledGraph graph;
  Permutation sigma;
};

inline std::vector<IsoClassMember> enumerate_iso_class_with_witness(const LabeledGraph& g,
                                                                   std::size_t cap = kDefaultEnumerationCap) {
  if (g.order() > cap)
    throw CapExceeded("isomorphism-class enumeration refused: " + std::to_string(g.order()) +
                      " vertices exceeds cap " + std::to_string(cap));
  std::vector<std::size_t> image(g.order());
  std::iota(image.begin(), image.end(), std::size_t{0});
  std::unordered_set<std::string> seen;
  std::vector<IsoClassMember> out;
  do {
    Permutation sigma(image);
    LabeledGraph h = permute(g, sigma);
    if (seen.insert(structure_key(h)).second) out.push_back({std::move(h), std::move(sigma)});
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

inline std::vector<LabeledGraph> enumerate_iso_class(const LabeledGraph& g, std::size_t cap = kDefaultEnumerationCap) {
  std::vector<LabeledGraph> out;
  for (auto& m : enumerate_iso_class_with_witness(g, cap)) out.push_back(std::move(m.graph));
  return out;
}

}  // namespace vnlab

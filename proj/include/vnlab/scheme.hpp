#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "vnlab/graph.hpp"
#include "vnlab/iso.hpp"
#include "vnlab/obfuscation.hpp"

namespace vnlab {

/// Total order on W; ranks are 1-based positions.
class NominationList {
 public:
  NominationList() = default;
  explicit NominationList(std::vector<VertexLabel> order) : order_(std::move(order)) {}

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<VertexLabel>& order() const noexcept { return order_; }
  const VertexLabel& operator[](std::size_t rank) const { return order_.at(rank - 1); }

  std::size_t rank(VertexLabel w) const {
    for (std::size_t i = 0; i < order_.size(); ++i)
      if (order_[i] == w) return i + 1;
    throw InvalidInput("label " + to_string(w) + " not in nomination list");
  }

  NominationList reversed() const { return NominationList({order_.rbegin(), order_.rend()}); }

  friend bool operator==(const NominationList&, const NominationList&) = default;

 private:
  std::vector<VertexLabel> order_;
};

/// (g1, o(g2), v*) -> ranking of W. Features travel inside the graphs.
using NominateFn = std::function<NominationList(const LabeledGraph&, const LabeledGraph&, VertexLabel)>;

/// Position-level core of a label-free scheme: g2 is given in canonical
/// layout; the result is an ordering of its positions, best first.
using PositionalFn =
    std::function<std::vector<std::size_t>(const LabeledGraph& g1, const LabeledGraph& g2, std::size_t v_star_index)>;

struct SchemeOptions {
  /// Largest m for which og2 is laid out by its exact canonical form even when
  /// color refinement is not discrete.
  std::size_t canonical_cap = kDefaultEnumerationCap;
};

class Scheme {
 public:
  Scheme() = default;
  Scheme(std::string name, NominateFn fn, PositionalFn positional = {})
      : name_(std::move(name)), fn_(std::move(fn)), positional_(std::move(positional)) {}

  const std::string& name() const noexcept { return name_; }
  bool has_positional() const noexcept { return static_cast<bool>(positional_); }
  const PositionalFn& positional() const noexcept { return positional_; }

  NominationList nominate(const LabeledGraph& g1, const LabeledGraph& og2, VertexLabel v_star) const {
    if (!g1.index_of(v_star)) throw InvalidInput("vertex of interest " + to_string(v_star) + " not in g1");
    for (const auto& l : og2.labels())
      if (l.ns != Namespace::W) throw InvalidInput("second graph must be obfuscated into W");
    NominationList out = fn_(g1, og2, v_star);
    if (out.size() != og2.order()) throw InvalidInput("scheme " + name_ + " returned a list of the wrong size");
    return out;
  }

 private:
  std::string name_;
  NominateFn fn_;
  PositionalFn positional_;
};

/// Positions of og2 in the layout handed to positional schemes: exact
/// canonical order when affordable, otherwise refinement order.
inline std::vector<std::size_t> anonymizing_order(const LabeledGraph& og2, const SchemeOptions& opt = {}) {
  if (og2.order() <= opt.canonical_cap) return canonical_form(og2).order();
  const auto colors = refine_colors(og2);
  if (is_discrete(colors)) return canonical_form(og2).order();
  return structural_order(og2);
}

/// Wrap a positional function. The inner function never sees W labels, so the
/// orbit rank sets it produces cannot depend on the obfuscation. Ties inside
/// the inner function should follow canonical position order, which is the
/// tie-break order T of every scheme built this way.
inline Scheme make_label_free_scheme(std::string name, PositionalFn inner, SchemeOptions opt = {}) {
  auto fn = [inner, opt](const LabeledGraph& g1, const LabeledGraph& og2, VertexLabel v_star) {
    const auto order = anonymizing_order(og2, opt);
    LabeledGraph laid = with_labels(reorder(og2, order), sequential_labels(og2.order(), Namespace::W));
    const auto ranked = inner(g1, laid, g1.require_index(v_star));
    std::vector<bool> seen(order.size(), false);
    std::vector<VertexLabel> out;
    out.reserve(order.size());
    for (auto p : ranked) {
      if (p >= order.size() || seen[p]) throw InvalidInput("positional scheme returned an invalid ordering");
      seen[p] = true;
      out.push_back(og2.label(order[p]));
    }
    return NominationList(std::move(out));
  };
  return Scheme(std::move(name), std::move(fn), std::move(inner));
}

/// Positions sorted by ascending score, ties by position.
inline std::vector<std::size_t> order_by_score(const std::vector<double>& score) {
  std::vector<std::size_t> idx(score.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  return idx;
}

// ------------------------------------------------- consistency criterion --

/// For every orbit (feature-preserving automorphisms when g2 has features)
/// the set of ranks it receives must be the same under o1 and o2.
inline bool check_consistency_criterion(const Scheme& scheme, const LabeledGraph& g1, const LabeledGraph& g2,
                                        VertexLabel v_star, const Obfuscation& o1, const Obfuscation& o2) {
  const auto l1 = scheme.nominate(g1, apply_obfuscation(g2, o1), v_star);
  const auto l2 = scheme.nominate(g1, apply_obfuscation(g2, o2), v_star);
  const auto orbits = automorphism_orbits(g2);
  for (const auto& orbit : orbits.orbits()) {
    std::set<std::size_t> r1, r2;
    for (const auto& u : orbit) {
      r1.insert(l1.rank(o1(u)));
      r2.insert(l2.rank(o2(u)));
    }
    if (r1 != r2) return false;
  }
  return true;
}

/// Pseudo-scheme that always puts one fixed W label first (if present) and
/// the rest in label order. Deliberately violates the criterion.
inline Scheme fixed_label_first_scheme(VertexLabel w0) {
  return Scheme("fixed-label-first", [w0](const LabeledGraph&, const LabeledGraph& og2, VertexLabel) {
    auto labels = og2.labels();
    std::sort(labels.begin(), labels.end());
    auto it = std::find(labels.begin(), labels.end(), w0);
    if (it != labels.end()) std::rotate(labels.begin(), it, it + 1);
    return NominationList(std::move(labels));
  });
}

inline Scheme reversal_scheme(const Scheme& base) {
  auto fn = [base](const LabeledGraph& g1, const LabeledGraph& og2, VertexLabel v) {
    return base.nominate(g1, og2, v).reversed();
  };
  PositionalFn positional;
  if (base.has_positional()) {
    positional = [inner = base.positional()](const LabeledGraph& g1, const LabeledGraph& g2, std::size_t v) {
      auto r = inner(g1, g2, v);
      std::reverse(r.begin(), r.end());
      return r;
    };
  }
  return Scheme("reversal(" + base.name() + ")", std::move(fn), std::move(positional));
}

}  // namespace vnlab

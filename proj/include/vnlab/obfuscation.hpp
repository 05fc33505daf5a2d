#pragma once

#include <map>
#include <vector>

#include "vnlab/graph.hpp"

namespace vnlab {

/// Bijection from the labels of g2 onto an obfuscating set W.
class Obfuscation {
 public:
  Obfuscation() = default;

  Obfuscation(const std::vector<VertexLabel>& domain, const std::vector<VertexLabel>& image) {
    if (domain.size() != image.size()) throw InvalidInput("obfuscation: domain and image sizes differ");
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (image[i].ns != Namespace::W) throw InvalidInput("obfuscation image must lie in namespace W");
      if (domain[i].ns == Namespace::W) throw InvalidInput("obfuscation domain must be disjoint from W");
      if (!forward_.emplace(domain[i], image[i]).second) throw InvalidInput("obfuscation domain has duplicates");
      if (!inverse_.emplace(image[i], domain[i]).second) throw InvalidInput("obfuscation is not injective");
    }
  }

  std::size_t size() const noexcept { return forward_.size(); }

  VertexLabel operator()(VertexLabel v) const {
    auto it = forward_.find(v);
    if (it == forward_.end()) throw InvalidInput("label " + to_string(v) + " outside obfuscation domain");
    return it->second;
  }

  VertexLabel inverse(VertexLabel w) const {
    auto it = inverse_.find(w);
    if (it == inverse_.end()) throw InvalidInput("label " + to_string(w) + " outside obfuscating set");
    return it->second;
  }

  bool covers(const LabeledGraph& g) const {
    if (g.order() != size()) return false;
    for (const auto& l : g.labels())
      if (!forward_.count(l)) return false;
    return true;
  }

  const std::map<VertexLabel, VertexLabel>& forward() const noexcept { return forward_; }
  const std::map<VertexLabel, VertexLabel>& backward() const noexcept { return inverse_; }

 private:
  std::map<VertexLabel, VertexLabel> forward_;
  std::map<VertexLabel, VertexLabel> inverse_;
};

/// o(g): relabel every vertex by o. The result lists vertices in increasing
/// W-label order, so the layout of g itself is not visible downstream.
inline LabeledGraph apply_obfuscation(const LabeledGraph& g, const Obfuscation& o) {
  if (!o.covers(g)) throw InvalidInput("obfuscation domain does not match graph labels");
  std::vector<std::size_t> order(g.order());
  std::vector<VertexLabel> w(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) {
    order[i] = i;
    w[i] = o(g.label(i));
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
  LabeledGraph laid = reorder(g, order);
  std::vector<VertexLabel> labels(g.order());
  for (std::size_t p = 0; p < order.size(); ++p) labels[p] = w[order[p]];
  return with_labels(laid, std::move(labels));
}

/// Undo apply_obfuscation; vertices come back in increasing V2-label order.
inline LabeledGraph remove_obfuscation(const LabeledGraph& og, const Obfuscation& o) {
  std::vector<VertexLabel> v2(og.order());
  for (std::size_t i = 0; i < og.order(); ++i) v2[i] = o.inverse(og.label(i));
  std::vector<std::size_t> order(og.order());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v2[a] < v2[b]; });
  LabeledGraph laid = reorder(og, order);
  std::vector<VertexLabel> labels(og.order());
  for (std::size_t p = 0; p < order.size(); ++p) labels[p] = v2[order[p]];
  return with_labels(laid, std::move(labels));
}

/// Obfuscation sending the i-th label of `domain` to w:(image_ids[i]).
inline Obfuscation make_obfuscation(const std::vector<VertexLabel>& domain, const std::vector<std::uint64_t>& image_ids) {
  std::vector<VertexLabel> image(image_ids.size());
  for (std::size_t i = 0; i < image_ids.size(); ++i) image[i] = {Namespace::W, image_ids[i]};
  return Obfuscation(domain, image);
}

/// Obfuscation that maps by position: i-th label of g to w:(i+1).
inline Obfuscation positional_obfuscation(const LabeledGraph& g) {
  std::vector<std::uint64_t> ids(g.order());
  std::iota(ids.begin(), ids.end(), std::uint64_t{1});
  return make_obfuscation(g.labels(), ids);
}

}  // namespace vnlab

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "vnlab/iso.hpp"
#include "vnlab/matching.hpp"
#include "vnlab/rng.hpp"
#include "vnlab/scheme.hpp"
#include "vnlab/spectral.hpp"

namespace vnlab {

/// Uniformly shuffled canonical positions, the shuffle seeded by a hash of the
/// canonical second graph and `seed`. Different seeds give different
/// consistency-respecting schemes.
inline Scheme random_baseline_scheme(std::uint64_t seed = 0, SchemeOptions opt = {}) {
  return make_label_free_scheme(
      "random(" + std::to_string(seed) + ")",
      [seed](const LabeledGraph&, const LabeledGraph& g2, std::size_t) {
        Rng rng(RngState{fnv1a(structure_key(g2)), RngState::mix(seed)});
        return rng.permutation(g2.order());
      },
      opt);
}

enum class GmMode { Exact, Relaxed, Auto };

inline const char* to_string(GmMode m) {
  switch (m) {
    case GmMode::Exact: return "exact";
    case GmMode::Relaxed: return "relaxed";
    case GmMode::Auto: return "auto";
  }
  return "?";
}

struct GmOptions {
  GmMode mode = GmMode::Auto;
  std::size_t exact_cap = kExactMatchCap;
  RelaxedMatchConfig relaxed{};
};

/// Ranking by graph matching. Rank 1 is the image of v* under the matcher's
/// permutation. Exact mode orders the rest by the best objective attainable
/// with v* forced onto each candidate; relaxed mode by the v* row of the final
/// doubly-stochastic iterate. Ties follow position order.
inline std::vector<std::size_t> gm_ranking(const LabeledGraph& g1, const LabeledGraph& g2, std::size_t v,
                                           const GmOptions& opt) {
  if (g1.order() != g2.order()) throw InvalidInput("graph matching scheme requires n = m");
  const std::size_t m = g2.order();
  const bool exact = opt.mode == GmMode::Exact || (opt.mode == GmMode::Auto && m <= opt.exact_cap);
  std::vector<double> score(m);
  std::size_t first = 0;
  if (exact) {
    const auto best = exact_match(g1, g2, opt.exact_cap);
    first = best.permutation(v);
    for (std::size_t w = 0; w < m; ++w) score[w] = exact_match_pinned(g1, g2, v, w, opt.exact_cap).objective;
  } else {
    const auto res = relaxed_match(g1, g2, opt.relaxed);
    first = res.permutation(v);
    for (std::size_t w = 0; w < m; ++w) score[w] = -res.soft(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w));
  }
  std::vector<std::size_t> rest;
  for (std::size_t w = 0; w < m; ++w)
    if (w != first) rest.push_back(w);
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  rest.insert(rest.begin(), first);
  return rest;
}

inline Scheme gm_scheme(GmOptions opt = {}, SchemeOptions sopt = {}) {
  return make_label_free_scheme(
      std::string("gm-") + to_string(opt.mode),
      [opt](const LabeledGraph& g1, const LabeledGraph& g2, std::size_t v) { return gm_ranking(g1, g2, v, opt); }, sopt);
}

inline Scheme spectral_scheme(std::size_t d, SpectralAlignment align, SchemeOptions sopt = {}) {
  if (d < 1) throw InvalidInput("embedding dimension must be at least 1");
  return make_label_free_scheme(
      "spectral(" + std::to_string(d) + "," + to_string(align) + ")",
      [d, align](const LabeledGraph& g1, const LabeledGraph& g2, std::size_t v) {
        const auto score = spectral_scores(g1, g2, v, d, align);
        std::vector<std::size_t> idx(score.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
        return idx;
      },
      sopt);
}

/// Feature-aware wrapper. Candidates are grouped by the distance of their
/// feature vector to v*'s, nearest group first. Inside a group the base
/// scheme ranks the induced subgraph against g1 restricted to vertices whose
/// features equal v*'s. Groups the base cannot handle keep position order.
inline Scheme feature_scheme(const Scheme& base, SchemeOptions sopt = {}) {
  if (!base.has_positional()) throw InvalidInput("feature wrapper needs a label-free base scheme");
  auto inner = base.positional();
  return make_label_free_scheme(
      "features(" + base.name() + ")",
      [inner](const LabeledGraph& g1, const LabeledGraph& g2, std::size_t v) -> std::vector<std::size_t> {
        if (!g1.has_features() || !g2.has_features()) return inner(g1, g2, v);
        const FeatureRow& x = g1.feature(v);
        if (g2.feature_dim() != x.size()) throw InvalidInput("feature dimensions differ between graphs");
        std::vector<double> dist(g2.order());
        for (std::size_t w = 0; w < g2.order(); ++w) {
          double s = 0.0;
          for (std::size_t j = 0; j < x.size(); ++j) s += (g2.feature(w)[j] - x[j]) * (g2.feature(w)[j] - x[j]);
          dist[w] = std::sqrt(s);
        }
        std::vector<std::size_t> same;
        std::size_t v_sub = 0;
        for (std::size_t i = 0; i < g1.order(); ++i)
          if (g1.feature(i) == x) {
            if (i == v) v_sub = same.size();
            same.push_back(i);
          }
        const LabeledGraph sub1 = induced_by_positions(g1, same);
        std::vector<double> levels(dist);
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        std::vector<std::size_t> out;
        for (double level : levels) {
          std::vector<std::size_t> group;
          for (std::size_t w = 0; w < g2.order(); ++w)
            if (dist[w] == level) group.push_back(w);
          std::vector<std::size_t> local(group.size());
          std::iota(local.begin(), local.end(), std::size_t{0});
          try {
            local = inner(sub1, induced_by_positions(g2, group), v_sub);
          } catch (const InvalidInput&) {
          } catch (const CapExceeded&) {
          }
          for (auto p : local) out.push_back(group[p]);
        }
        return out;
      },
      sopt);
}

}  // namespace vnlab

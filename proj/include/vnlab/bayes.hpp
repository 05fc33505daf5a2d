#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vnlab/distribution.hpp"
#include "vnlab/iso.hpp"
#include "vnlab/rational.hpp"
#include "vnlab/rng.hpp"
#include "vnlab/scheme.hpp"

namespace vnlab {

struct BayesOptions {
  std::size_t cap = kDefaultEnumerationCap;
  /// Re-chooses the cell representatives: each cell's tie order becomes the
  /// vertex order of a randomly relabeled class member.
  std::optional<std::uint64_t> representative_seed;
  /// Explicit tie order on W for the orbit scheme (best first). Empty means
  /// canonical position order.
  std::vector<VertexLabel> tie_order;
};

/// Per-cell mass over canonical positions: mass[p] is the total atom mass in
/// the cell for which o(v*) sits at canonical position p.
struct BayesCell {
  std::vector<Rational> mass;
  Rational total = 0;
  std::vector<std::size_t> tie_rank;
  OrbitPartition orbits;
};

class BayesTable {
 public:
  BayesTable(const FiniteDistribution& F, const BayesOptions& opt) : v_star_(F.v_star()), cap_(opt.cap) {
    if (F.m() > opt.cap)
      throw CapExceeded("Bayes scheme refused: m = " + std::to_string(F.m()) + " exceeds cap " + std::to_string(opt.cap));
    for (const auto& atom : F.atoms()) {
      if (atom.mass == 0) continue;
      const auto& p = atom.pair;
      const CanonicalForm cf = canonical_form(p.g2);
      const std::string key = g1_key(p.g1) + '\x1f' + cf.key();
      auto [it, fresh] = cells_.try_emplace(key);
      BayesCell& cell = it->second;
      if (fresh) {
        const std::size_t m = p.g2.order();
        cell.mass.assign(m, Rational(0));
        cell.orbits = automorphism_orbits(cf.canonical_graph);
        cell.tie_rank.resize(m);
        std::iota(cell.tie_rank.begin(), cell.tie_rank.end(), std::size_t{0});
        if (opt.representative_seed) {
          Rng rng(RngState{*opt.representative_seed, fnv1a(key)});
          cell.tie_rank = rng.permutation(m);
        }
      }
      const std::size_t u = p.g2.require_index(p.counterpart(v_star_));
      cell.mass[cf.witness(u)] += atom.mass;
      cell.total += atom.mass;
    }
  }

  VertexLabel v_star() const noexcept { return v_star_; }
  std::size_t cap() const noexcept { return cap_; }

  struct Lookup {
    const BayesCell* cell;
    std::vector<std::size_t> order;  // canonical position -> og2 position
  };

  Lookup find(const LabeledGraph& g1, const LabeledGraph& og2, VertexLabel v) const {
    if (v != v_star_) throw InvalidInput("Bayes scheme was built for " + to_string(v_star_));
    if (og2.order() > cap_) throw UndefinedConditional("input outside the distribution's support");
    const CanonicalForm cf = canonical_form(og2);
    auto it = cells_.find(g1_key(g1) + '\x1f' + cf.key());
    if (it == cells_.end()) throw UndefinedConditional("input pair lies outside the distribution's support");
    return {&it->second, cf.order()};
  }

  /// P[w = o(v*) | cell] for every w of og2.
  std::map<VertexLabel, Rational> conditionals(const LabeledGraph& g1, const LabeledGraph& og2, VertexLabel v) const {
    const auto look = find(g1, og2, v);
    std::map<VertexLabel, Rational> out;
    for (std::size_t p = 0; p < look.order.size(); ++p)
      out[og2.label(look.order[p])] = look.cell->mass[p] / look.cell->total;
    return out;
  }

  bool all_cells_asymmetric() const {
    for (const auto& [_, c] : cells_)
      if (!c.orbits.all_singletons()) return false;
    return true;
  }

  std::size_t cell_count() const noexcept { return cells_.size(); }

 private:
  VertexLabel v_star_;
  std::size_t cap_;
  std::unordered_map<std::string, BayesCell> cells_;
};

/// Ranks W by descending conditional probability of being o(v*); ties follow
/// the cell's tie order. Requires every support graph to be asymmetric.
inline Scheme bayes_optimal_scheme(const FiniteDistribution& F, BayesOptions opt = {}) {
  auto table = std::make_shared<const BayesTable>(F, opt);
  if (!table->all_cells_asymmetric())
    throw InvalidInput("flat Bayes scheme needs asymmetric support graphs; use the orbit variant");
  return Scheme("bayes", [table](const LabeledGraph& g1, const LabeledGraph& og2, VertexLabel v) {
    const auto look = table->find(g1, og2, v);
    const BayesCell& cell = *look.cell;
    std::vector<std::size_t> pos(look.order.size());
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
      if (cell.mass[a] != cell.mass[b]) return cell.mass[a] > cell.mass[b];
      return cell.tie_rank[a] < cell.tie_rank[b];
    });
    std::vector<VertexLabel> out;
    for (auto p : pos) out.push_back(og2.label(look.order[p]));
    return NominationList(std::move(out));
  });
}

/// Orbit-level ranking: orbits by descending conditional mass, then one
/// vertex at a time from each orbit in turn, each orbit yielding its members
/// in tie order.
inline Scheme bayes_optimal_orbit_scheme(const FiniteDistribution& F, BayesOptions opt = {}) {
  auto table = std::make_shared<const BayesTable>(F, opt);
  auto tie = std::make_shared<const std::vector<VertexLabel>>(opt.tie_order);
  return Scheme("bayes-orbit", [table, tie](const LabeledGraph& g1, const LabeledGraph& og2, VertexLabel v) {
    const auto look = table->find(g1, og2, v);
    const BayesCell& cell = *look.cell;
    const auto& orbits = cell.orbits.positions();
    auto t_rank = [&](std::size_t p) -> std::size_t {
      if (tie->empty()) return cell.tie_rank[p];
      auto it = std::find(tie->begin(), tie->end(), og2.label(look.order[p]));
      if (it == tie->end()) throw InvalidInput("tie order does not cover " + to_string(og2.label(look.order[p])));
      return static_cast<std::size_t>(it - tie->begin());
    };
    std::vector<std::vector<std::size_t>> psi;
    std::vector<Rational> psi_mass;
    for (const auto& orbit : orbits) {
      auto members = orbit;
      std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) { return t_rank(a) < t_rank(b); });
      Rational mass = 0;
      for (auto p : members) mass += cell.mass[p];
      psi.push_back(std::move(members));
      psi_mass.push_back(mass);
    }
    std::vector<std::size_t> idx(psi.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (psi_mass[a] != psi_mass[b]) return psi_mass[a] > psi_mass[b];
      return t_rank(psi[a].front()) < t_rank(psi[b].front());
    });
    std::vector<VertexLabel> out;
    std::vector<std::size_t> next(psi.size(), 0);
    while (out.size() < look.order.size())
      for (auto j : idx)
        if (next[j] < psi[j].size()) out.push_back(og2.label(look.order[psi[j][next[j]++]]));
    return NominationList(std::move(out));
  });
}

}  // namespace vnlab

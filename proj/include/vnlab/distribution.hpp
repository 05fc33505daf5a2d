#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "vnlab/iso.hpp"
#include "vnlab/models.hpp"
#include "vnlab/rational.hpp"

namespace vnlab {

/// Key of g1 that ignores its vertex layout but not its labels.
inline std::string g1_key(const LabeledGraph& g1) {
  std::vector<std::size_t> order(g1.order());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g1.label(a) < g1.label(b); });
  LabeledGraph laid = reorder(g1, order);
  std::string key = structure_key(laid);
  for (const auto& l : laid.labels()) {
    key.push_back(static_cast<char>(l.ns));
    key.append(reinterpret_cast<const char*>(&l.id), sizeof l.id);
  }
  return key;
}

struct Atom {
  NominatablePair pair;
  Rational mass;
};

/// Explicit finite-support measure over nominatable pairs with a fixed
/// vertex of interest. Masses are exact and sum to one.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;

  FiniteDistribution(std::vector<Atom> atoms, VertexLabel v_star) : atoms_(std::move(atoms)), v_star_(v_star) {
    if (atoms_.empty()) throw InvalidInput("distribution needs at least one atom");
    Rational total = 0;
    const auto& first = atoms_.front().pair;
    auto sorted_labels = [](const LabeledGraph& g) {
      auto l = g.labels();
      std::sort(l.begin(), l.end());
      return l;
    };
    const auto l1 = sorted_labels(first.g1), l2 = sorted_labels(first.g2);
    for (const auto& a : atoms_) {
      if (a.mass < 0) throw InvalidInput("negative atom mass");
      total += a.mass;
      const auto& p = a.pair;
      if (p.g1.order() != first.g1.order() || p.g2.order() != first.g2.order() || p.core_size != first.core_size)
        throw InvalidInput("atoms disagree on n, m or core size");
      if (sorted_labels(p.g1) != l1 || sorted_labels(p.g2) != l2) throw InvalidInput("atoms disagree on label sets");
      if (!p.in_core(v_star_)) throw InvalidInput("vertex of interest is not a core vertex");
    }
    if (total != 1) throw InvalidInput("atom masses sum to " + to_string(total) + ", not 1");
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  VertexLabel v_star() const noexcept { return v_star_; }
  std::size_t n() const { return atoms_.front().pair.g1.order(); }
  std::size_t m() const { return atoms_.front().pair.g2.order(); }
  std::size_t core_size() const { return atoms_.front().pair.core_size; }

 private:
  std::vector<Atom> atoms_;
  VertexLabel v_star_;
};

inline FiniteDistribution make_finite_support(std::vector<Atom> atoms, VertexLabel v_star) {
  return FiniteDistribution(std::move(atoms), v_star);
}

/// Real-valued masses: accepted when they sum to one within 1e-12, then
/// stored exactly after renormalization.
inline FiniteDistribution make_finite_support(const std::vector<std::pair<NominatablePair, double>>& atoms,
                                              VertexLabel v_star) {
  double total = 0;
  for (const auto& [_, w] : atoms) total += w;
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("atom masses do not sum to 1");
  std::vector<Atom> out;
  Rational exact_total = 0;
  for (const auto& [p, w] : atoms) {
    out.push_back({p, rational_from_double(w)});
    exact_total += out.back().mass;
  }
  for (auto& a : out) a.mass /= exact_total;
  return FiniteDistribution(std::move(out), v_star);
}

inline FiniteDistribution uniform_iso_class_distribution(const LabeledGraph& g1, const LabeledGraph& g2,
                                                         VertexLabel v_star, std::size_t cap = kDefaultEnumerationCap) {
  auto members = enumerate_iso_class(g2, cap);
  const Rational mass(1, static_cast<long long>(members.size()));
  const std::size_t c = std::min(g1.order(), g2.order());
  std::vector<Atom> atoms;
  atoms.reserve(members.size());
  for (auto& h : members) atoms.push_back({NominatablePair(g1, std::move(h), c), mass});
  return FiniteDistribution(std::move(atoms), v_star);
}

}  // namespace vnlab

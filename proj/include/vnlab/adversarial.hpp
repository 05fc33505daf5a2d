#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vnlab/distribution.hpp"
#include "vnlab/eval.hpp"
#include "vnlab/iso.hpp"
#include "vnlab/models.hpp"
#include "vnlab/rational.hpp"
#include "vnlab/scheme.hpp"

namespace vnlab {

inline constexpr std::size_t kAdversarialEnumerationCap = 7;

/// Strictly increasing eps_1 < ... < eps_{m-1} with eps_i in (0, i/m). The
/// fiber masses are xi_i = eps_i - eps_{i-1} (eps_0 = 0) and xi_m = 1 - eps_{m-1}.
class EpsilonSequence {
 public:
  EpsilonSequence(std::size_t m, std::vector<Rational> eps) : m_(m), eps_(std::move(eps)) {
    if (m < 2) throw InvalidInput("epsilon sequence needs m >= 2");
    if (eps_.size() != m - 1) throw InvalidInput("epsilon sequence needs m-1 entries");
    Rational prev = 0;
    for (std::size_t i = 1; i < m; ++i) {
      const Rational& e = eps_[i - 1];
      if (!(e > prev)) throw InvalidInput("epsilon sequence must be positive and strictly increasing");
      if (!(e < Rational(static_cast<long long>(i), static_cast<long long>(m))))
        throw InvalidInput("eps_" + std::to_string(i) + " must be below " + std::to_string(i) + "/" + std::to_string(m));
      prev = e;
    }
  }

  /// eps_i = i / (2m).
  static EpsilonSequence standard(std::size_t m) {
    std::vector<Rational> e;
    for (std::size_t i = 1; i < m; ++i) e.emplace_back(static_cast<long long>(i), static_cast<long long>(2 * m));
    return EpsilonSequence(m, std::move(e));
  }

  /// eps_{m-k} = target; below it a small linear ramp, above it each entry
  /// halves the distance to i/m.
  static EpsilonSequence with_target(std::size_t m, std::size_t k, const Rational& target) {
    require_level(k, m);
    const std::size_t anchor = m - k;
    if (!(target > 0) || !(target < Rational(static_cast<long long>(anchor), static_cast<long long>(m))))
      throw InvalidInput("target epsilon must lie in (0, (m-k)/m)");
    std::vector<Rational> e;
    for (std::size_t i = 1; i < m; ++i) {
      if (i < anchor)
        e.push_back(target * Rational(static_cast<long long>(i), static_cast<long long>(10 * anchor)));
      else if (i == anchor)
        e.push_back(target);
      else
        e.push_back((e.back() + Rational(static_cast<long long>(i), static_cast<long long>(m))) / 2);
    }
    return EpsilonSequence(m, std::move(e));
  }

  std::size_t m() const noexcept { return m_; }
  const Rational& eps(std::size_t i) const { return eps_.at(i - 1); }

  Rational xi(std::size_t k) const {
    if (k < 1 || k > m_) throw InvalidInput("xi index out of range");
    if (k == m_) return 1 - eps_.back();
    return eps(k) - (k == 1 ? Rational(0) : eps(k - 1));
  }

 private:
  std::size_t m_;
  std::vector<Rational> eps_;
};

/// 1 - k/m.
inline Rational chance_line(std::size_t m, std::size_t k) {
  require_level(k, m);
  return 1 - Rational(static_cast<long long>(k), static_cast<long long>(m));
}

struct AdversarialDistribution {
  FiniteDistribution dist;
  /// fiber_size[k] = number of class members on which o(v*) is ranked k.
  std::vector<std::size_t> fiber_size;
  /// fiber[i] = rank of o(v*) on atom i.
  std::vector<std::size_t> fiber;
};

/// Mass xi_k spread evenly over the relabelings of g2 on which the scheme
/// ranks o(v*) at k.
inline AdversarialDistribution build_adversarial(const Scheme& scheme, const LabeledGraph& g1, const LabeledGraph& g2,
                                                 const Obfuscation& o, VertexLabel v_star, const EpsilonSequence& eps,
                                                 std::size_t cap = kAdversarialEnumerationCap) {
  if (eps.m() != g2.order()) throw InvalidInput("epsilon sequence length does not match m");
  if (!is_asymmetric(g1) || !is_asymmetric(g2)) throw InvalidInput("adversarial construction needs asymmetric graphs");
  const std::size_t m = g2.order(), c = std::min(g1.order(), m);
  const auto members = enumerate_iso_class(g2, cap);
  std::vector<NominatablePair> pairs;
  std::vector<std::size_t> fiber;
  std::vector<std::size_t> size(m + 1, 0);
  pairs.reserve(members.size());
  for (const auto& h : members) {
    pairs.emplace_back(g1, h, c, "adversarial");
    const std::size_t r = rank_of_truth(scheme, pairs.back(), o, v_star);
    fiber.push_back(r);
    ++size[r];
  }
  std::vector<Atom> atoms;
  atoms.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::size_t k = fiber[i];
    atoms.push_back({std::move(pairs[i]), eps.xi(k) / Rational(static_cast<long long>(size[k]))});
  }
  for (std::size_t k = 1; k <= m; ++k)
    if (size[k] == 0 && eps.xi(k) > 0)
      throw InvalidInput("rank fiber " + std::to_string(k) + " is empty but needs positive mass");
  return {FiniteDistribution(std::move(atoms), v_star), std::move(size), std::move(fiber)};
}

/// Smallest asymmetric graph for n = 6; a seeded Erdos-Renyi search otherwise.
inline LabeledGraph asymmetric_graph(std::size_t n, Namespace ns = Namespace::V1, std::uint64_t seed = 7) {
  if (n < 6) throw InvalidInput("no asymmetric graph has fewer than 6 vertices");
  if (n == 6) return make_graph(6, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 5}, {4, 6}}, ns);
  Rng rng(RngState{seed, n});
  return sample_asymmetric([&](Rng& r) { return sample_er(n, 0.5, r, ns); }, rng);
}

struct SequenceRow {
  std::size_t n = 0, m = 0, k = 0;
  Rational scheme_error;
  Rational reversal_error;
  Rational eps_bound;
  Rational bayes_error;
};

/// Adversarial distributions against scheme_for(n) for each n, with
/// eps_{m-k_n} = target. Graphs grow by adding vertices, so cores nest.
inline std::vector<SequenceRow> universal_inconsistency_sequence(const std::function<Scheme(std::size_t)>& scheme_for,
                                                                 const std::vector<std::size_t>& n_values,
                                                                 const Rational& eps_target, const KRule& k_rule,
                                                                 std::size_t cap = kDefaultEnumerationCap) {
  std::vector<SequenceRow> rows;
  for (std::size_t n : n_values) {
    const LabeledGraph base = asymmetric_graph(n);
    const LabeledGraph g1 = base;
    const LabeledGraph g2 = with_labels(base, sequential_labels(n, Namespace::V2));
    const Obfuscation o = positional_obfuscation(g2);
    const std::size_t k = k_rule(n);
    const auto eps = EpsilonSequence::with_target(n, k, eps_target);
    const Scheme phi = scheme_for(n);
    const auto adv = build_adversarial(phi, g1, g2, o, {Namespace::V1, 1}, eps, cap);
    auto obf = [&o](const Atom&) { return o; };
    SequenceRow row;
    row.n = n;
    row.m = n;
    row.k = k;
    row.scheme_error = exact_error(phi, adv.dist, k, obf);
    row.reversal_error = exact_error(reversal_scheme(phi), adv.dist, k, obf);
    row.eps_bound = eps.eps(n - k);
    row.bayes_error = bayes_error_oracle(adv.dist, k);
    rows.push_back(row);
  }
  return rows;
}

struct FiberSample {
  NominatablePair pair;
  Permutation sigma;
  std::size_t tries = 0;
};

/// Uniform draw from the rank-k fiber by rejection over uniform relabelings.
inline FiberSample sample_fiber(const Scheme& scheme, const LabeledGraph& g1, const LabeledGraph& g2,
                                const Obfuscation& o, VertexLabel v_star, std::size_t k, Rng& rng) {
  if (!is_asymmetric(g2)) throw InvalidInput("fiber sampling needs an asymmetric g2");
  if (k < 1 || k > g2.order()) throw InvalidInput("fiber rank out of range");
  const std::size_t c = std::min(g1.order(), g2.order());
  for (std::size_t tries = 1;; ++tries) {
    Permutation sigma(rng.permutation(g2.order()));
    NominatablePair pair(g1, permute(g2, sigma), c, "fiber");
    if (rank_of_truth(scheme, pair, o, v_star) == k) return {std::move(pair), std::move(sigma), tries};
  }
}

}  // namespace vnlab

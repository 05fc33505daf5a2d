#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <exception>
#include <tuple>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "vnlab/distribution.hpp"
#include "vnlab/iso.hpp"
#include "vnlab/obfuscation.hpp"
#include "vnlab/rational.hpp"
#include "vnlab/rng.hpp"
#include "vnlab/scheme.hpp"

namespace vnlab {

// ------------------------------------------------------------ exact loss --

/// Rank of o(v*'s counterpart) in the scheme's list.
inline std::size_t rank_of_truth(const Scheme& scheme, const NominatablePair& pair, const Obfuscation& o,
                                 VertexLabel v_star) {
  const auto list = scheme.nominate(pair.g1, apply_obfuscation(pair.g2, o), v_star);
  return list.rank(o(pair.counterpart(v_star)));
}

inline void require_level(std::size_t k, std::size_t m) {
  if (k < 1 || k + 1 > m) throw InvalidInput("level k must lie in [1, m-1]");
}

/// 1 iff o(v*) is ranked k+1 or worse.
inline int level_k_loss(const Scheme& scheme, const NominatablePair& pair, const Obfuscation& o, VertexLabel v_star,
                        std::size_t k) {
  require_level(k, pair.g2.order());
  return rank_of_truth(scheme, pair, o, v_star) >= k + 1 ? 1 : 0;
}

using ObfuscationFor = std::function<Obfuscation(const Atom&)>;

inline ObfuscationFor positional_obfuscation_for() {
  return [](const Atom& a) { return positional_obfuscation(a.pair.g2); };
}

/// mass[r] = probability that o(v*) receives rank r (index 0 unused).
inline std::vector<Rational> rank_masses(const Scheme& scheme, const FiniteDistribution& F,
                                         const ObfuscationFor& obf = positional_obfuscation_for()) {
  std::vector<Rational> mass(F.m() + 1, Rational(0));
  for (const auto& atom : F.atoms()) {
    if (atom.mass == 0) continue;
    mass[rank_of_truth(scheme, atom.pair, obf(atom), F.v_star())] += atom.mass;
  }
  return mass;
}

/// errors[k] = L_k for k in [1, m-1] (index 0 unused).
inline std::vector<Rational> errors_from_rank_masses(const std::vector<Rational>& mass) {
  std::vector<Rational> err(mass.size() > 1 ? mass.size() - 1 : 1, Rational(0));
  Rational covered = 0;
  for (std::size_t k = 1; k < err.size(); ++k) {
    covered += mass[k];
    err[k] = 1 - covered;
  }
  return err;
}

inline std::vector<Rational> exact_errors(const Scheme& scheme, const FiniteDistribution& F,
                                          const ObfuscationFor& obf = positional_obfuscation_for()) {
  return errors_from_rank_masses(rank_masses(scheme, F, obf));
}

inline Rational exact_error(const Scheme& scheme, const FiniteDistribution& F, std::size_t k,
                            const ObfuscationFor& obf = positional_obfuscation_for()) {
  require_level(k, F.m());
  return exact_errors(scheme, F, obf)[k];
}

// ---------------------------------------------------------- Bayes oracle --

/// Level-k Bayes errors for every k by the majorization sum: within each
/// support cell the k largest per-vertex masses are the best any consistent
/// scheme can cover. Cells are formed with find_isomorphism, independently of
/// the canonical-form machinery the Bayes scheme uses.
inline std::vector<Rational> bayes_errors(const FiniteDistribution& F) {
  struct Cell {
    std::string key1;
    LabeledGraph rep;
    std::vector<Rational> mass;
  };
  std::vector<Cell> cells;
  for (const auto& atom : F.atoms()) {
    if (atom.mass == 0) continue;
    const auto& p = atom.pair;
    const std::string key1 = g1_key(p.g1);
    const std::size_t u = p.g2.require_index(p.counterpart(F.v_star()));
    bool placed = false;
    for (auto& c : cells) {
      if (c.key1 != key1) continue;
      auto sigma = find_isomorphism(c.rep, p.g2);
      if (!sigma) continue;
      c.mass[sigma->inverse()(u)] += atom.mass;
      placed = true;
      break;
    }
    if (!placed) {
      if (!is_asymmetric(p.g2)) throw InvalidInput("Bayes-error oracle needs asymmetric support graphs");
      Cell c{key1, p.g2, std::vector<Rational>(p.g2.order(), Rational(0))};
      c.mass[u] += atom.mass;
      cells.push_back(std::move(c));
    }
  }
  const std::size_t m = F.m();
  std::vector<Rational> err(m, Rational(0));
  for (std::size_t k = 1; k < m; ++k) {
    Rational covered = 0;
    for (auto& c : cells) {
      auto sorted = c.mass;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      for (std::size_t r = 0; r < k; ++r) covered += sorted[r];
    }
    err[k] = 1 - covered;
  }
  return err;
}

inline Rational bayes_error_oracle(const FiniteDistribution& F, std::size_t k) {
  require_level(k, F.m());
  return bayes_errors(F)[k];
}

// ----------------------------------------------------------- Monte Carlo --

struct ErrorEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t trials = 0;
  std::size_t losses = 0;
  RngState seed{};
};

inline double normal_quantile_two_sided(double confidence) {
  return boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
}

/// Wilson score interval for `losses` out of `trials`.
inline std::pair<double, double> wilson_interval(std::size_t losses, std::size_t trials, double confidence = 0.95) {
  if (trials == 0) return {0.0, 1.0};
  const double z = normal_quantile_two_sided(confidence);
  const double nn = static_cast<double>(trials), ph = static_cast<double>(losses) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (ph + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline ErrorEstimate make_estimate(std::size_t losses, std::size_t trials, RngState seed, double confidence = 0.95) {
  ErrorEstimate e;
  e.trials = trials;
  e.losses = losses;
  e.seed = seed;
  e.point = trials ? static_cast<double>(losses) / static_cast<double>(trials) : 0.0;
  std::tie(e.ci_low, e.ci_high) = wilson_interval(losses, trials, confidence);
  e.ci_low = std::min(e.ci_low, e.point);
  e.ci_high = std::max(e.ci_high, e.point);
  return e;
}

using PairSampler = std::function<NominatablePair(Rng&)>;

/// Obfuscation onto w:1..m in uniformly random order.
inline Obfuscation random_obfuscation(const LabeledGraph& g2, Rng& rng) {
  auto perm = rng.permutation(g2.order());
  std::vector<std::uint64_t> ids(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) ids[i] = perm[i] + 1;
  return make_obfuscation(g2.labels(), ids);
}

/// Runs body(t) for t in [0, trials) on `jobs` threads, t assigned round robin.
template <class Body>
void parallel_trials(std::size_t trials, std::size_t jobs, Body&& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, trials));
  if (jobs == 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(jobs);
  for (std::size_t j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      try {
        for (std::size_t t = j; t < trials; t += jobs) body(t);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// counts[r] = number of trials in which o(v*) received rank r. Trial t draws
/// from the stream seed.substream(t), so results do not depend on `jobs`.
inline std::vector<std::size_t> mc_rank_counts(const Scheme& scheme, const PairSampler& sampler, VertexLabel v_star,
                                               std::size_t trials, RngState seed, std::size_t jobs = 1) {
  std::vector<std::size_t> ranks(trials, 0);
  parallel_trials(trials, jobs, [&](std::size_t t) {
    Rng rng(seed.substream(t));
    const NominatablePair pair = sampler(rng);
    const Obfuscation o = random_obfuscation(pair.g2, rng);
    ranks[t] = rank_of_truth(scheme, pair, o, v_star);
  });
  std::size_t m = 0;
  for (auto r : ranks) m = std::max(m, r);
  std::vector<std::size_t> counts(m + 1, 0);
  for (auto r : ranks) ++counts[r];
  return counts;
}

inline std::size_t losses_at_level(const std::vector<std::size_t>& counts, std::size_t k) {
  std::size_t l = 0;
  for (std::size_t r = k + 1; r < counts.size(); ++r) l += counts[r];
  return l;
}

inline ErrorEstimate mc_error(const Scheme& scheme, const PairSampler& sampler, VertexLabel v_star, std::size_t k,
                              std::size_t trials, RngState seed, std::size_t jobs = 1, double confidence = 0.95) {
  if (trials < 1) throw InvalidInput("trials must be at least 1");
  const auto counts = mc_rank_counts(scheme, sampler, v_star, trials, seed, jobs);
  return make_estimate(losses_at_level(counts, k), trials, seed, confidence);
}

/// Pearson statistic of counts[1..m] against the uniform law and its p-value.
inline std::pair<double, double> chi_square_uniform(const std::vector<std::size_t>& counts, std::size_t m) {
  std::size_t total = 0;
  for (std::size_t r = 1; r <= m; ++r) total += r < counts.size() ? counts[r] : 0;
  const double expected = static_cast<double>(total) / static_cast<double>(m);
  double stat = 0.0;
  for (std::size_t r = 1; r <= m; ++r) {
    const double o = r < counts.size() ? static_cast<double>(counts[r]) : 0.0;
    stat += (o - expected) * (o - expected) / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(m - 1));
  return {stat, boost::math::cdf(boost::math::complement(dist, stat))};
}

// ----------------------------------------------------- consistency curve --

struct KRule {
  enum class Kind { Constant, Fraction, Function };
  Kind kind = Kind::Constant;
  std::size_t constant = 1;
  double fraction = 0.0;
  std::function<std::size_t(std::size_t)> fn;

  static KRule fixed(std::size_t k) { return {Kind::Constant, k, 0.0, {}}; }
  static KRule of_n(double f) { return {Kind::Fraction, 0, f, {}}; }
  static KRule custom(std::function<std::size_t(std::size_t)> f) { return {Kind::Function, 0, 0.0, std::move(f)}; }

  std::size_t operator()(std::size_t n) const {
    switch (kind) {
      case Kind::Constant: return constant;
      case Kind::Fraction: return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fraction * n + 1e-9)));
      case Kind::Function: return fn(n);
    }
    return 1;
  }
};

inline double indep_er_bayes_error(std::size_t n, std::size_t k) { return 1.0 - static_cast<double>(k) / n; }
inline double iid_sbm_bayes_error(std::size_t n, std::size_t k) { return std::max(1.0 - 2.0 * k / n, 0.0); }

struct CurvePoint {
  std::size_t n = 0, m = 0, c = 0, k = 0;
  ErrorEstimate estimate;
  std::optional<double> bayes_ref;
};

struct ConsistencyCurve {
  std::vector<CurvePoint> per_n;
};

struct CurveSpec {
  std::function<Scheme(std::size_t n)> scheme_for;
  std::function<PairSampler(std::size_t n)> sampler_for;
  KRule k_rule;
  std::vector<std::size_t> n_values;
  std::size_t trials = 100;
  RngState seed{};
  std::size_t jobs = 1;
  VertexLabel v_star{Namespace::V1, 1};
  double confidence = 0.95;
  std::function<std::optional<double>(std::size_t n, std::size_t k)> bayes_ref;
};

inline ConsistencyCurve consistency_curve(const CurveSpec& spec) {
  for (std::size_t i = 1; i < spec.n_values.size(); ++i)
    if (spec.n_values[i] <= spec.n_values[i - 1]) throw InvalidInput("n values must be strictly increasing");
  ConsistencyCurve curve;
  for (std::size_t i = 0; i < spec.n_values.size(); ++i) {
    const std::size_t n = spec.n_values[i];
    const Scheme scheme = spec.scheme_for(n);
    const PairSampler sampler = spec.sampler_for(n);
    Rng probe(spec.seed.substream(1u << 20));
    const NominatablePair shape = sampler(probe);
    CurvePoint pt;
    pt.n = shape.g1.order();
    pt.m = shape.g2.order();
    pt.c = shape.core_size;
    pt.k = spec.k_rule(n);
    require_level(pt.k, pt.m);
    const RngState s{spec.seed.seed, spec.seed.stream + i};
    pt.estimate = mc_error(scheme, sampler, spec.v_star, pt.k, spec.trials, s, spec.jobs, spec.confidence);
    if (spec.bayes_ref) pt.bayes_ref = spec.bayes_ref(n, pt.k);
    curve.per_n.push_back(pt);
  }
  return curve;
}

}  // namespace vnlab

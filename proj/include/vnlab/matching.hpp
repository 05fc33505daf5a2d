#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "vnlab/graph.hpp"
#include "vnlab/lap.hpp"

namespace vnlab {

inline constexpr std::size_t kExactMatchCap = 10;

/// Alignment of g1 (rows, V1 positions) onto g2 positions:
/// permutation(i) is the g2 position matched to g1 position i.
struct MatchResult {
  Permutation permutation;
  double objective = 0.0;
  bool certified = false;
  bool converged = true;
  /// Final doubly-stochastic iterate (relaxed solver only).
  Eigen::MatrixXd soft;
};

/// Number of vertex pairs {i, j} whose adjacency differs between g1 and g2
/// under q (pairs of g1 compared with their images in g2).
inline std::size_t edge_disagreements(const LabeledGraph& g1, const LabeledGraph& g2, const Permutation& q) {
  if (g1.order() != g2.order() || q.size() != g1.order()) throw InvalidInput("matching requires equal vertex counts");
  std::size_t d = 0;
  for (std::size_t i = 0; i < g1.order(); ++i)
    for (std::size_t j = i + 1; j < g1.order(); ++j) d += g1.has_edge(i, j) != g2.has_edge(q(i), q(j));
  return d;
}

/// ||AQ - QB||_F for the permutation matrix of q.
inline double gm_delta(const LabeledGraph& g1, const LabeledGraph& g2, const Permutation& q) {
  return std::sqrt(2.0 * static_cast<double>(edge_disagreements(g1, g2, q)));
}

namespace detail {

/// Depth-first branch and bound over permutations in lexicographic order.
/// Lower bound: fixed disagreements, plus for every unassigned row the
/// cheapest disagreement count against assigned rows, plus the edge-count gap
/// between the unassigned parts.
class MatchSearch {
 public:
  MatchSearch(const LabeledGraph& a, const LabeledGraph& b) : a_(a), b_(b), n_(a.order()) {
    if (a.order() != b.order()) throw InvalidInput("matching requires equal vertex counts");
  }

  /// Lex-smallest minimizer, optionally with pin.first fixed to pin.second.
  std::pair<std::vector<std::size_t>, std::size_t> minimize(std::optional<std::pair<std::size_t, std::size_t>> pin) {
    pin_ = pin;
    best_.resize(n_);
    std::iota(best_.begin(), best_.end(), std::size_t{0});
    if (pin) {
      std::swap(best_[pin->first], best_[std::find(best_.begin(), best_.end(), pin->second) - best_.begin()]);
    }
    best_cost_ = cost_of(best_);
    mode_ = Mode::Minimize;
    start();
    return {best_, best_cost_};
  }

  /// True when no permutation other than the identity reaches the identity's cost.
  bool identity_is_unique_minimizer() {
    pin_.reset();
    std::vector<std::size_t> id(n_);
    std::iota(id.begin(), id.end(), std::size_t{0});
    best_cost_ = cost_of(id);
    mode_ = Mode::FindRival;
    rival_ = false;
    start();
    return !rival_;
  }

 private:
  enum class Mode { Minimize, FindRival };
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t cost_of(const std::vector<std::size_t>& p) const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) d += a_.has_edge(i, j) != b_.has_edge(p[i], p[j]);
    return d;
  }

  void start() {
    cur_.assign(n_, kNone);
    used_.assign(n_, false);
    edges_a_free_ = a_.edge_count();
    edges_b_free_ = b_.edge_count();
    dfs(0, 0);
  }

  std::size_t lower_bound(std::size_t depth, std::size_t fixed) const {
    std::size_t lb = fixed;
    for (std::size_t i = depth; i < n_; ++i) {
      std::size_t best = kNone;
      for (std::size_t j = 0; j < n_; ++j) {
        if (used_[j] || (pin_ && i == pin_->first && j != pin_->second) ||
            (pin_ && i != pin_->first && j == pin_->second && depth <= pin_->first))
          continue;
        std::size_t d = 0;
        for (std::size_t k = 0; k < depth; ++k) d += a_.has_edge(i, k) != b_.has_edge(j, cur_[k]);
        best = std::min(best, d);
      }
      lb += best == kNone ? 0 : best;
    }
    const std::size_t gap = edges_a_free_ > edges_b_free_ ? edges_a_free_ - edges_b_free_ : edges_b_free_ - edges_a_free_;
    return lb + gap;
  }

  bool prefix_after_best(std::size_t depth) const {
    for (std::size_t k = 0; k < depth; ++k)
      if (cur_[k] != best_[k]) return cur_[k] > best_[k];
    return false;
  }

  bool prune(std::size_t depth, std::size_t fixed) const {
    const std::size_t lb = lower_bound(depth, fixed);
    if (lb > best_cost_) return true;
    if (lb == best_cost_ && mode_ == Mode::Minimize) return prefix_after_best(depth);
    return false;
  }

  void dfs(std::size_t depth, std::size_t fixed) {
    if (mode_ == Mode::FindRival && rival_) return;
    if (depth == n_) {
      if (mode_ == Mode::FindRival) {
        bool identity = true;
        for (std::size_t k = 0; k < n_ && identity; ++k) identity = cur_[k] == k;
        if (!identity && fixed <= best_cost_) rival_ = true;
        return;
      }
      if (fixed < best_cost_ || (fixed == best_cost_ && cur_ < best_)) {
        best_cost_ = fixed;
        best_ = cur_;
      }
      return;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (used_[j]) continue;
      if (pin_ && depth == pin_->first && j != pin_->second) continue;
      if (pin_ && depth != pin_->first && j == pin_->second) continue;
      std::size_t add = 0, deg_a = 0, deg_b = 0;
      for (std::size_t k = 0; k < depth; ++k) add += a_.has_edge(depth, k) != b_.has_edge(j, cur_[k]);
      for (std::size_t k = depth + 1; k < n_; ++k) deg_a += a_.has_edge(depth, k);
      for (std::size_t k = 0; k < n_; ++k)
        if (!used_[k] && k != j) deg_b += b_.has_edge(j, k);
      cur_[depth] = j;
      used_[j] = true;
      edges_a_free_ -= deg_a;
      edges_b_free_ -= deg_b;
      if (!prune(depth + 1, fixed + add)) dfs(depth + 1, fixed + add);
      edges_a_free_ += deg_a;
      edges_b_free_ += deg_b;
      used_[j] = false;
      cur_[depth] = kNone;
      if (mode_ == Mode::FindRival && rival_) return;
    }
  }

  const LabeledGraph& a_;
  const LabeledGraph& b_;
  std::size_t n_;
  std::optional<std::pair<std::size_t, std::size_t>> pin_;
  std::vector<std::size_t> cur_, best_;
  std::vector<bool> used_;
  std::size_t best_cost_ = 0;
  std::size_t edges_a_free_ = 0, edges_b_free_ = 0;
  Mode mode_ = Mode::Minimize;
  bool rival_ = false;
};

inline void require_exact_size(const LabeledGraph& g1, const LabeledGraph& g2, std::size_t cap) {
  if (g1.order() != g2.order()) throw InvalidInput("matching requires equal vertex counts");
  if (g1.order() > cap)
    throw CapExceeded("exact matching refused above " + std::to_string(cap) + " vertices; use the relaxed matcher");
}

}  // namespace detail

/// Global minimizer of the matching objective; among minimizers the
/// lexicographically smallest permutation.
inline MatchResult exact_match(const LabeledGraph& g1, const LabeledGraph& g2, std::size_t cap = kExactMatchCap) {
  detail::require_exact_size(g1, g2, cap);
  detail::MatchSearch search(g1, g2);
  auto [perm, cost] = search.minimize(std::nullopt);
  return {Permutation(std::move(perm)), std::sqrt(2.0 * static_cast<double>(cost)), true, true, {}};
}

/// Best permutation subject to q(row) = col.
inline MatchResult exact_match_pinned(const LabeledGraph& g1, const LabeledGraph& g2, std::size_t row,
                                      std::size_t col, std::size_t cap = kExactMatchCap) {
  detail::require_exact_size(g1, g2, cap);
  if (row >= g1.order() || col >= g2.order()) throw InvalidInput("pin out of range");
  detail::MatchSearch search(g1, g2);
  auto [perm, cost] = search.minimize(std::pair{row, col});
  return {Permutation(std::move(perm)), std::sqrt(2.0 * static_cast<double>(cost)), true, true, {}};
}

/// argmin of the objective is exactly {identity} (positions aligned by index).
inline bool identity_is_unique_minimizer(const LabeledGraph& g1, const LabeledGraph& g2, std::size_t cap = kExactMatchCap) {
  detail::require_exact_size(g1, g2, cap);
  detail::MatchSearch search(g1, g2);
  return search.identity_is_unique_minimizer();
}

/// Same question answered by visiting all n! permutations.
inline bool identity_is_unique_minimizer_enumerated(const LabeledGraph& g1, const LabeledGraph& g2,
                                                    std::size_t cap = kExactMatchCap) {
  detail::require_exact_size(g1, g2, cap);
  const std::size_t n = g1.order();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  const std::size_t base = edge_disagreements(g1, g2, Permutation(p));
  while (std::next_permutation(p.begin(), p.end())) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < n && d <= base; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d += g1.has_edge(i, j) != g2.has_edge(p[i], p[j]);
    if (d <= base) return false;
  }
  return true;
}

struct RelaxedMatchConfig {
  enum class Init { Barycenter, Identity };
  Init init = Init::Barycenter;
  std::size_t max_iterations = 100;
  double relative_tolerance = 1e-6;
};

inline Eigen::MatrixXd adjacency_matrix(const LabeledGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (g.has_edge(i, j)) A(i, j) = A(j, i) = 1.0;
  return A;
}

/// Frank-Wolfe on ||AD - DB||_F^2 over doubly-stochastic D, rounded by an
/// assignment solve that maximizes <D, P>.
inline MatchResult relaxed_match(const LabeledGraph& g1, const LabeledGraph& g2, const RelaxedMatchConfig& cfg = {}) {
  if (g1.order() != g2.order()) throw InvalidInput("matching requires equal vertex counts");
  const auto n = static_cast<Eigen::Index>(g1.order());
  if (n == 0) return {Permutation::identity(0), 0.0, false, true, {}};
  const Eigen::MatrixXd A = adjacency_matrix(g1), B = adjacency_matrix(g2);
  Eigen::MatrixXd D = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  if (cfg.init == RelaxedMatchConfig::Init::Identity) D.setIdentity();
  Eigen::MatrixXd M = A * D - D * B;
  double f = M.squaredNorm();
  bool converged = f == 0.0;
  for (std::size_t it = 0; it < cfg.max_iterations && !converged; ++it) {
    const Eigen::MatrixXd G = 2.0 * (A * M - M * B);
    const auto dir = solve_lap(G);
    std::vector<std::size_t> inv(dir.size());
    for (std::size_t i = 0; i < dir.size(); ++i) inv[dir[i]] = i;
    // A P - P B for the permutation matrix P(i, dir[i]) = 1, then N = A(P - D) - (P - D)B.
    Eigen::MatrixXd N(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) N(i, j) = A(i, static_cast<Eigen::Index>(inv[j])) - B(static_cast<Eigen::Index>(dir[i]), j);
    N -= M;
    const double a = N.squaredNorm(), b = 2.0 * (M.array() * N.array()).sum();
    double t = 0.0;
    if (a > 0.0)
      t = std::clamp(-b / (2.0 * a), 0.0, 1.0);
    else if (b < 0.0)
      t = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) D.row(i) *= 1.0 - t;
    for (Eigen::Index i = 0; i < n; ++i) D(i, static_cast<Eigen::Index>(dir[i])) += t;
    M += t * N;
    const double f_new = M.squaredNorm();
    if (f - f_new < cfg.relative_tolerance * std::max(f, std::numeric_limits<double>::min()) || f_new == 0.0)
      converged = true;
    f = f_new;
  }
  const auto rounded = solve_lap(-D);
  Permutation q(rounded);
  return {q, gm_delta(g1, g2, q), false, converged, std::move(D)};
}

}  // namespace vnlab

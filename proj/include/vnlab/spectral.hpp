#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "vnlab/graph.hpp"
#include "vnlab/matching.hpp"

namespace vnlab {

/// Adjacency spectral embedding: the d eigenpairs of largest |lambda|, rows
/// scaled by sqrt(|lambda|). Column signs are fixed so the column sum (or,
/// when that vanishes, the sum of cubes) is positive.
inline Eigen::MatrixXd spectral_embedding(const LabeledGraph& g, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(g.order());
  if (d < 1) throw InvalidInput("embedding dimension must be at least 1");
  if (static_cast<Eigen::Index>(d) > n) throw InvalidInput("embedding dimension exceeds vertex count");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(adjacency_matrix(g));
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double x = std::abs(lambda(a)), y = std::abs(lambda(b));
    if (x != y) return x > y;
    return lambda(a) > lambda(b);
  });
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(d); ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(idx[c]) * std::sqrt(std::abs(lambda(idx[c])));
    double s = v.sum();
    if (std::abs(s) < 1e-9 * std::max(1.0, v.cwiseAbs().sum())) s = v.array().cube().sum();
    if (s < 0) v = -v;
    X.col(c) = v;
  }
  return X;
}

struct Clustering {
  std::vector<std::size_t> label;
  Eigen::MatrixXd centers;
};

/// Lloyd's k-means with farthest-first seeding from the largest-norm row.
inline Clustering kmeans(const Eigen::MatrixXd& X, std::size_t K, std::size_t max_iter = 100) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (K == 0 || K > n) throw InvalidInput("cluster count must lie in [1, n]");
  Eigen::MatrixXd C(static_cast<Eigen::Index>(K), X.cols());
  std::vector<std::size_t> chosen;
  {
    Eigen::Index first = 0;
    X.rowwise().squaredNorm().maxCoeff(&first);
    chosen.push_back(static_cast<std::size_t>(first));
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    while (chosen.size() < K) {
      const auto last = static_cast<Eigen::Index>(chosen.back());
      std::size_t far = 0;
      double best = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        mind[i] = std::min(mind[i], (X.row(i) - X.row(last)).squaredNorm());
        if (mind[i] > best) {
          best = mind[i];
          far = i;
        }
      }
      chosen.push_back(far);
    }
    for (std::size_t k = 0; k < K; ++k) C.row(k) = X.row(chosen[k]);
  }
  std::vector<std::size_t> label(n, K);
  for (std::size_t it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best_k = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < K; ++k) {
        const double dist = (X.row(i) - C.row(k)).squaredNorm();
        if (dist < best) {
          best = dist;
          best_k = k;
        }
      }
      if (label[i] != best_k) {
        label[i] = best_k;
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(C.rows(), C.cols());
    std::vector<std::size_t> count(K, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum.row(label[i]) += X.row(i);
      ++count[label[i]];
    }
    for (std::size_t k = 0; k < K; ++k)
      if (count[k]) C.row(k) = sum.row(k) / static_cast<double>(count[k]);
  }
  return {std::move(label), std::move(C)};
}

/// Edge density inside each cluster (0 for clusters with fewer than two members).
inline std::vector<double> cluster_densities(const LabeledGraph& g, const std::vector<std::size_t>& label, std::size_t K) {
  std::vector<double> edges(K, 0.0), size(K, 0.0);
  for (std::size_t i = 0; i < g.order(); ++i) {
    size[label[i]] += 1.0;
    for (std::size_t j = i + 1; j < g.order(); ++j)
      if (label[i] == label[j] && g.has_edge(i, j)) edges[label[i]] += 1.0;
  }
  std::vector<double> out(K, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    if (size[k] >= 2.0) out[k] = edges[k] / (size[k] * (size[k] - 1.0) / 2.0);
  return out;
}

/// argmin over orthogonal W of ||Y W - X||_F.
inline Eigen::MatrixXd orthogonal_procrustes(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Y.transpose() * X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Orthogonal alignment of Y onto X without correspondences: every diagonal
/// sign matrix seeds alternating nearest-neighbour / Procrustes updates;
/// the best final fit wins.
inline Eigen::MatrixXd seedless_procrustes(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X, std::size_t iters = 30) {
  const auto d = Y.cols();
  const std::size_t inits = d <= 8 ? (std::size_t{1} << d) : 2;
  Eigen::MatrixXd best_w = Eigen::MatrixXd::Identity(d, d);
  double best_fit = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < inits; ++s) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Identity(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
      if (d <= 8 ? ((s >> c) & 1u) : s == 1) W(c, c) = -1.0;
    double fit = 0.0;
    for (std::size_t it = 0; it <= iters; ++it) {
      const Eigen::MatrixXd Z = Y * W;
      Eigen::MatrixXd target(Y.rows(), d);
      fit = 0.0;
      for (Eigen::Index i = 0; i < Z.rows(); ++i) {
        Eigen::Index nn = 0;
        fit += (X.rowwise() - Z.row(i)).rowwise().squaredNorm().minCoeff(&nn);
        target.row(i) = X.row(nn);
      }
      if (it == iters) break;
      W = orthogonal_procrustes(Y, target);
    }
    if (fit < best_fit) {
      best_fit = fit;
      best_w = W;
    }
  }
  return best_w;
}

enum class SpectralAlignment { None, Density, AntiDensity, SeedlessProcrustes };

inline const char* to_string(SpectralAlignment a) {
  switch (a) {
    case SpectralAlignment::None: return "none";
    case SpectralAlignment::Density: return "density";
    case SpectralAlignment::AntiDensity: return "anti-density";
    case SpectralAlignment::SeedlessProcrustes: return "seedless-procrustes";
  }
  return "?";
}

/// Score per g2 position (lower is better) for nominating g1's vertex v.
inline std::vector<std::pair<double, double>> spectral_scores(const LabeledGraph& g1, const LabeledGraph& g2,
                                                              std::size_t v, std::size_t d, SpectralAlignment align) {
  if (d > g1.order() || d > g2.order()) throw InvalidInput("embedding dimension exceeds vertex count");
  const Eigen::MatrixXd X1 = spectral_embedding(g1, d);
  Eigen::MatrixXd X2 = spectral_embedding(g2, d);
  std::vector<double> outside(g2.order(), 0.0);
  switch (align) {
    case SpectralAlignment::None:
      break;
    case SpectralAlignment::SeedlessProcrustes:
      X2 = X2 * seedless_procrustes(X2, X1);
      break;
    case SpectralAlignment::Density:
    case SpectralAlignment::AntiDensity: {
      const std::size_t K = d;
      const auto c1 = kmeans(X1, K), c2 = kmeans(X2, K);
      const auto d1 = cluster_densities(g1, c1.label, K), d2 = cluster_densities(g2, c2.label, K);
      auto by_density = [K](const std::vector<double>& dens) {
        std::vector<std::size_t> r(K);
        std::iota(r.begin(), r.end(), std::size_t{0});
        std::stable_sort(r.begin(), r.end(), [&](std::size_t a, std::size_t b) { return dens[a] > dens[b]; });
        return r;
      };
      const auto r1 = by_density(d1);
      auto r2 = by_density(d2);
      if (align == SpectralAlignment::AntiDensity) std::reverse(r2.begin(), r2.end());
      std::vector<std::size_t> partner(K);
      Eigen::MatrixXd C1(K, d), C2(K, d);
      for (std::size_t r = 0; r < K; ++r) {
        partner[r1[r]] = r2[r];
        C1.row(r) = c1.centers.row(r1[r]);
        C2.row(r) = c2.centers.row(r2[r]);
      }
      X2 = X2 * orthogonal_procrustes(C2, C1);
      const std::size_t target = partner[c1.label[v]];
      for (std::size_t w = 0; w < g2.order(); ++w) outside[w] = c2.label[w] == target ? 0.0 : 1.0;
      break;
    }
  }
  std::vector<std::pair<double, double>> score(g2.order());
  for (std::size_t w = 0; w < g2.order(); ++w)
    score[w] = {outside[w], (X2.row(w) - X1.row(v)).norm()};
  return score;
}

}  // namespace vnlab

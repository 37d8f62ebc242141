#include "sfsdfc/fclust.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

#include "sfsdfc/parallel.hpp"

namespace sfsdfc {

namespace {

void check_params(DensityParams params) {
  if (!(params.beta > 0) || !(params.gamma > 0)) {
    throw std::invalid_argument("density parameters beta and gamma must be positive");
  }
}

double radius_of(const DissimilarityMatrix& matrix, std::size_t center, std::span<const std::size_t> members) {
  double r = 0.0;
  for (std::size_t k : members) r = std::max(r, matrix(center, k));
  return r;
}

bool by_center(const FeatureCluster& a, const FeatureCluster& b) { return a.center < b.center; }

}  // namespace

DensityParams estimate_params(const DissimilarityMatrix& matrix) {
  DensityParams params{1.0, 2.0};
  const std::size_t m = matrix.size();
  if (m < 2) return params;
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) sum += matrix(i, j);
  }
  const double mean = sum / static_cast<double>(m * (m - 1) / 2);
  if (mean > 0) params.beta = mean;
  return params;
}

std::vector<double> density(const DissimilarityMatrix& matrix, DensityParams params, unsigned threads) {
  check_params(params);
  const std::size_t m = matrix.size();
  std::vector<double> p(m, 0.0);
  parallel_for(m, threads, [&](std::size_t j) {
    double sum = 0.0;
    for (double d : matrix.row(j)) sum += std::exp(-params.gamma * d / params.beta);
    p[j] = sum;
  });
  return p;
}

std::vector<std::size_t> fps_centers(const DissimilarityMatrix& matrix, std::span<const double> densities,
                                     DensityParams params, double sharing) {
  check_params(params);
  const std::size_t m = matrix.size();
  if (densities.size() != m) throw std::invalid_argument("one density per feature required");
  if (!(sharing > 0 && sharing < 1)) throw std::invalid_argument("sharing factor must lie in (0, 1)");

  std::vector<double> working(densities.begin(), densities.end());
  std::vector<char> chosen(m, 0);
  std::vector<char> covered(m, 0);
  std::size_t uncovered = m;
  std::vector<std::size_t> centers;

  while (uncovered > 0) {
    std::size_t best = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (chosen[j]) continue;
      if (best == m || working[j] > working[best]) best = j;
    }
    chosen[best] = 1;
    centers.push_back(best);
    for (std::size_t k = 0; k < m; ++k) {
      if (matrix(best, k) < params.beta) {
        working[k] *= sharing;
        if (!covered[k]) {
          covered[k] = 1;
          --uncovered;
        }
      }
    }
  }
  return centers;
}

std::vector<FeatureCluster> assign(const DissimilarityMatrix& matrix, std::span<const std::size_t> centers) {
  if (centers.empty()) throw std::invalid_argument("at least one center required");
  const std::size_t m = matrix.size();

  std::vector<std::size_t> sorted(centers.begin(), centers.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> slot_of(m, -1);  // center row -> position in `centers`
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (centers[c] >= m) throw std::out_of_range("center index out of range");
    if (slot_of[centers[c]] >= 0) throw std::invalid_argument("duplicate center");
    slot_of[centers[c]] = static_cast<int>(c);
  }

  std::vector<FeatureCluster> clusters(centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) clusters[c].center = centers[c];

  for (std::size_t k = 0; k < m; ++k) {
    std::size_t owner = k;
    if (slot_of[k] < 0) {
      owner = sorted.front();
      for (std::size_t c : sorted) {
        if (matrix(k, c) < matrix(k, owner)) owner = c;
      }
    }
    clusters[static_cast<std::size_t>(slot_of[owner])].members.push_back(k);
  }
  for (auto& cluster : clusters) cluster.radius = radius_of(matrix, cluster.center, cluster.members);
  return clusters;
}

std::vector<FeatureCluster> merge(std::vector<FeatureCluster> clusters, const DissimilarityMatrix& matrix,
                                  std::span<const double> densities) {
  if (densities.size() != matrix.size()) throw std::invalid_argument("one density per feature required");
  std::sort(clusters.begin(), clusters.end(), by_center);

  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < clusters.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < clusters.size() && !merged; ++b) {
        const double d = matrix(clusters[a].center, clusters[b].center);
        if (!(d < clusters[a].radius + clusters[b].radius)) continue;

        FeatureCluster joined;
        std::merge(clusters[a].members.begin(), clusters[a].members.end(), clusters[b].members.begin(),
                   clusters[b].members.end(), std::back_inserter(joined.members));
        joined.center = joined.members.front();
        for (std::size_t k : joined.members) {
          if (densities[k] > densities[joined.center]) joined.center = k;
        }
        joined.radius = radius_of(matrix, joined.center, joined.members);

        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
        clusters[a] = std::move(joined);
        std::sort(clusters.begin(), clusters.end(), by_center);
        merged = true;
      }
    }
  }
  return clusters;
}

Clustering cluster_features(std::span<const std::size_t> view, const DissimilarityMatrix& matrix,
                            const ClusterOptions& options) {
  if (view.size() != matrix.size()) throw std::invalid_argument("view and matrix sizes differ");
  Clustering result;
  result.kind = matrix.kind();
  if (view.empty()) return result;

  DensityParams params = estimate_params(matrix);
  if (options.beta) params.beta = *options.beta;
  if (options.gamma) params.gamma = *options.gamma;
  result.params = params;

  const auto p = density(matrix, params, options.threads);
  const auto centers = fps_centers(matrix, p, params, options.sharing);
  auto clusters = merge(assign(matrix, centers), matrix, p);

  for (auto& cluster : clusters) {
    cluster.center = view[cluster.center];
    for (auto& k : cluster.members) k = view[k];
    std::sort(cluster.members.begin(), cluster.members.end());
  }
  std::sort(clusters.begin(), clusters.end(), by_center);
  result.clusters = std::move(clusters);
  return result;
}

}  // namespace sfsdfc

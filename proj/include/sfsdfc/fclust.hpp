#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sfsdfc/dataset.hpp"
#include "sfsdfc/measures.hpp"

namespace sfsdfc {

/// Kernel parameters: beta normalizes dissimilarities, gamma sharpens the kernel.
struct DensityParams {
  double beta = 1.0;
  double gamma = 2.0;

  friend bool operator==(const DensityParams&, const DensityParams&) = default;
};

struct FeatureCluster {
  std::size_t center = 0;
  std::vector<std::size_t> members;  // ascending, center included
  double radius = 0.0;               // max dissimilarity from center to a member

  friend bool operator==(const FeatureCluster&, const FeatureCluster&) = default;
};

struct Clustering {
  FeatureKind kind = FeatureKind::continuous;
  DensityParams params;
  std::vector<FeatureCluster> clusters;  // feature indices of the dataset

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

/// beta = mean off-diagonal dissimilarity (1 when that mean is 0), gamma = 2.
DensityParams estimate_params(const DissimilarityMatrix& matrix);

/// P(j) = sum_k exp(-gamma * D(j, k) / beta). The self term contributes 1.
std::vector<double> density(const DissimilarityMatrix& matrix, DensityParams params, unsigned threads = 1);

constexpr double kDefaultSharing = 0.5;

/// Fitness-proportionate-sharing search for temporary centers.
///
/// Repeatedly picks the feature with the highest working density among those
/// not yet chosen (ties -> lowest index) and multiplies the working density
/// of every feature within dissimilarity < beta of it by `sharing`. Stops once
/// every feature lies within beta of some chosen center. Returns centers in
/// the order they were chosen; indices are matrix rows.
std::vector<std::size_t> fps_centers(const DissimilarityMatrix& matrix, std::span<const double> densities,
                                     DensityParams params, double sharing = kDefaultSharing);

/// Nearest-center assignment (ties -> lowest center index). A center always
/// stays in its own cluster. Indices are matrix rows.
std::vector<FeatureCluster> assign(const DissimilarityMatrix& matrix, std::span<const std::size_t> centers);

/// Merges clusters whose centers are closer than the sum of their radii until
/// no pair qualifies. Pairs are scanned lowest-center-first and the scan
/// restarts after each merge. The merged center is the densest member
/// (ties -> lowest index). Output is ordered by center.
std::vector<FeatureCluster> merge(std::vector<FeatureCluster> clusters, const DissimilarityMatrix& matrix,
                                  std::span<const double> densities);

struct ClusterOptions {
  std::optional<double> beta;
  std::optional<double> gamma;
  double sharing = kDefaultSharing;
  unsigned threads = 1;
};

/// Full pipeline over one feature view: estimate_params, density,
/// fps_centers, assign, merge. `view[i]` is the dataset index of matrix row i;
/// the returned clusters use dataset indices.
Clustering cluster_features(std::span<const std::size_t> view, const DissimilarityMatrix& matrix,
                            const ClusterOptions& options = {});

}  // namespace sfsdfc

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfsdfc/dataset.hpp"
#include "sfsdfc/fclust.hpp"
#include "sfsdfc/measures.hpp"

namespace sfsdfc {

enum class SelectionReason { center, most_relevant };

std::string_view to_string(SelectionReason reason);

struct SelectedFeature {
  std::size_t index = 0;  // dataset feature index
  FeatureKind kind = FeatureKind::continuous;
  std::size_t cluster = 0;  // position in that kind's cluster list
  SelectionReason reason = SelectionReason::center;
  double relevance = 0.0;  // bits

  friend bool operator==(const SelectedFeature&, const SelectedFeature&) = default;
};

/// Per-cluster relevant-and-representative choice.
///
/// `relevance` is indexed by dataset feature index. A cluster whose center
/// attains the maximum relevance (ties favour the center) contributes the
/// center alone; otherwise it contributes the center and its most relevant
/// member (ties -> lowest index).
std::vector<SelectedFeature> select_representatives(const Clustering& clustering,
                                                    std::span<const double> relevance);

/// Computes relevance_mi for the clustered features, then applies
/// select_representatives.
std::vector<SelectedFeature> select_from_clusters(const Clustering& clustering, const Dataset& data, int bins);

/// relevance_mi of every feature; continuous features use `bins` equal-frequency bins.
std::vector<double> feature_relevance(const Dataset& data, int bins, unsigned threads = 1);

struct PipelineOptions {
  std::optional<double> epsilon;  // re-type features with this threshold
  std::optional<double> beta;
  std::optional<double> gamma;
  double sharing = kDefaultSharing;
  std::optional<int> bins;  // default ceil(sqrt(n))
  unsigned threads = 1;
};

struct SelectionResult {
  std::string dataset;
  std::vector<std::size_t> selected;       // ascending dataset indices
  std::vector<SelectedFeature> provenance;  // parallel to `selected`
  std::vector<FeatureKind> kinds;           // kind of every dataset feature as used
  std::vector<std::size_t> excluded_constant;
  Clustering continuous;
  Clustering discrete;
  DissimilarityMatrix continuous_matrix;
  DissimilarityMatrix discrete_matrix;
  std::vector<std::size_t> continuous_view;  // dataset index of each matrix row
  std::vector<std::size_t> discrete_view;
  int bins = 0;
};

/// Type, split, cluster and select. Throws DatasetError("no informative
/// features") when every feature is constant.
SelectionResult run_pipeline(const Dataset& data, const PipelineOptions& options = {});

}  // namespace sfsdfc

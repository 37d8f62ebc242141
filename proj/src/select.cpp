#include "sfsdfc/select.hpp"

#include <algorithm>
#include <stdexcept>

#include "sfsdfc/log.hpp"
#include "sfsdfc/parallel.hpp"

namespace sfsdfc {

std::string_view to_string(SelectionReason reason) {
  return reason == SelectionReason::center ? "center" : "most-relevant";
}

std::vector<SelectedFeature> select_representatives(const Clustering& clustering,
                                                    std::span<const double> relevance) {
  std::vector<SelectedFeature> picked;
  for (std::size_t c = 0; c < clustering.clusters.size(); ++c) {
    const auto& cluster = clustering.clusters[c];
    const double center_score = relevance[cluster.center];

    std::optional<std::size_t> best;
    for (std::size_t k : cluster.members) {
      if (k == cluster.center) continue;
      if (!best || relevance[k] > relevance[*best]) best = k;
    }

    picked.push_back({cluster.center, clustering.kind, c, SelectionReason::center, center_score});
    if (best && relevance[*best] > center_score) {
      picked.push_back({*best, clustering.kind, c, SelectionReason::most_relevant, relevance[*best]});
    }
  }
  return picked;
}

std::vector<double> feature_relevance(const Dataset& data, int bins, unsigned threads) {
  std::vector<double> scores(data.n_features(), 0.0);
  parallel_for(data.n_features(), threads,
               [&](std::size_t j) { scores[j] = relevance_mi(data.features[j], data.labels, bins); });
  return scores;
}

std::vector<SelectedFeature> select_from_clusters(const Clustering& clustering, const Dataset& data, int bins) {
  std::vector<double> scores(data.n_features(), 0.0);
  for (const auto& cluster : clustering.clusters) {
    for (std::size_t k : cluster.members) scores[k] = relevance_mi(data.features.at(k), data.labels, bins);
  }
  return select_representatives(clustering, scores);
}

SelectionResult run_pipeline(const Dataset& input, const PipelineOptions& options) {
  input.validate();
  const Dataset data = options.epsilon ? with_kinds(input, infer_feature_kinds(input, options.epsilon)) : input;
  for (const auto& f : data.features) {
    if (f.has_missing()) throw DatasetError("feature '" + f.name + "' has missing values; impute first");
  }

  SelectionResult result;
  result.dataset = data.name;
  result.bins = options.bins.value_or(default_bins(data.n_samples()));
  if (result.bins < 2) throw std::invalid_argument("bins must be at least 2");
  for (const auto& f : data.features) result.kinds.push_back(f.kind);

  result.excluded_constant = constant_features(data);
  if (result.excluded_constant.size() == data.n_features()) throw DatasetError("no informative features");
  for (std::size_t j : result.excluded_constant) {
    log_warning("feature '" + data.features[j].name + "' is constant; excluded from selection");
  }
  const auto is_constant = [&](std::size_t j) {
    return std::binary_search(result.excluded_constant.begin(), result.excluded_constant.end(), j);
  };

  auto views = split_by_kind(data);
  std::erase_if(views.continuous, is_constant);
  std::erase_if(views.discrete, is_constant);
  result.continuous_view = views.continuous;
  result.discrete_view = views.discrete;

  ClusterOptions cluster_options;
  cluster_options.beta = options.beta;
  cluster_options.gamma = options.gamma;
  cluster_options.sharing = options.sharing;
  cluster_options.threads = options.threads;

  const auto standardized = standardize(data, views.continuous);
  result.continuous_matrix = dissimilarity_matrix(standardized.columns, options.threads);
  result.continuous = cluster_features(views.continuous, result.continuous_matrix, cluster_options);

  std::vector<std::vector<int>> codes;
  codes.reserve(views.discrete.size());
  for (std::size_t j : views.discrete) codes.push_back(data.features[j].codes());
  result.discrete_matrix = dissimilarity_matrix(codes, options.threads);
  result.discrete = cluster_features(views.discrete, result.discrete_matrix, cluster_options);

  std::vector<double> scores(data.n_features(), 0.0);
  std::vector<std::size_t> clustered = views.continuous;
  clustered.insert(clustered.end(), views.discrete.begin(), views.discrete.end());
  parallel_for(clustered.size(), options.threads, [&](std::size_t i) {
    const std::size_t j = clustered[i];
    scores[j] = relevance_mi(data.features[j], data.labels, result.bins);
  });

  auto picked = select_representatives(result.continuous, scores);
  const auto picked_disc = select_representatives(result.discrete, scores);
  picked.insert(picked.end(), picked_disc.begin(), picked_disc.end());
  std::sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) { return a.index < b.index; });

  result.provenance = std::move(picked);
  for (const auto& p : result.provenance) result.selected.push_back(p.index);
  return result;
}

}  // namespace sfsdfc

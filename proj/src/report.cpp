#include "sfsdfc/report.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sfsdfc {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& value) { return value ? json(*value) : json(nullptr); }

json cluster_list(const Clustering& clustering) {
  json out = json::array();
  for (const auto& c : clustering.clusters) {
    out.push_back({{"kind", to_string(clustering.kind)},
                   {"center", c.center},
                   {"members", c.members},
                   {"radius", c.radius}});
  }
  return out;
}

}  // namespace

json to_json(const PipelineOptions& options) {
  return {{"epsilon", optional_number(options.epsilon)},
          {"beta", optional_number(options.beta)},
          {"gamma", optional_number(options.gamma)},
          {"sharing", options.sharing},
          {"bins", options.bins ? json(*options.bins) : json(nullptr)}};
}

json selection_to_json(const SelectionResult& result, const Dataset& data, const json& config) {
  json selected = json::array();
  for (const auto& p : result.provenance) {
    selected.push_back({{"index", p.index},
                        {"name", data.features.at(p.index).name},
                        {"kind", to_string(p.kind)},
                        {"cluster", p.cluster},
                        {"reason", to_string(p.reason)},
                        {"relevance_bits", p.relevance}});
  }
  const auto n_cont = static_cast<std::size_t>(std::count(result.kinds.begin(), result.kinds.end(), FeatureKind::continuous));
  json excluded = json::array();
  for (std::size_t j : result.excluded_constant) excluded.push_back(data.features.at(j).name);

  return {{"tool", kToolVersion},
          {"dataset", result.dataset},
          {"options", {{"bins", result.bins},
                       {"beta_continuous", result.continuous.params.beta},
                       {"gamma_continuous", result.continuous.params.gamma},
                       {"beta_discrete", result.discrete.params.beta},
                       {"gamma_discrete", result.discrete.params.gamma}}},
          {"config", config},
          {"n_samples", data.n_samples()},
          {"n_features", data.n_features()},
          {"selected", std::move(selected)},
          {"counts", {{"continuous", n_cont},
                      {"discrete", result.kinds.size() - n_cont},
                      {"clusters_cont", result.continuous.clusters.size()},
                      {"clusters_disc", result.discrete.clusters.size()}}},
          {"excluded_constant", std::move(excluded)}};
}

SubsetSpec subset_from_json(const json& selection) {
  if (!selection.is_object() || !selection.contains("selected") || !selection["selected"].is_array()) {
    throw std::invalid_argument("not a selection result: missing 'selected' array");
  }
  SubsetSpec spec;
  spec.dataset = selection.value("dataset", "");
  for (const auto& entry : selection["selected"]) {
    const auto& index = entry.at("index");
    if (!index.is_number_integer() || index.get<long long>() < 0) {
      throw std::invalid_argument("selected feature index must be a non-negative integer");
    }
    const auto j = index.get<std::size_t>();
    if (std::find(spec.indices.begin(), spec.indices.end(), j) != spec.indices.end()) {
      throw std::invalid_argument("selected feature index " + std::to_string(j) + " listed twice");
    }
    spec.indices.push_back(j);
    spec.names.push_back(entry.value("name", ""));
  }
  return spec;
}

json clusters_to_json(const SelectionResult& result) {
  json out = cluster_list(result.continuous);
  for (auto& c : cluster_list(result.discrete)) out.push_back(std::move(c));
  return out;
}

json eval_report_to_json(const EvalReport& report, const json& config) {
  return {{"tool", kToolVersion},
          {"config", config},
          {"metric", report.metric},
          {"folds", report.options.folds},
          {"repeats", report.options.repeats},
          {"k", report.options.k},
          {"seed", report.options.seed},
          {"subset", report.subset},
          {"subset_size", report.subset_size()},
          {"per_repeat_fold_accuracy", report.fold_accuracy},
          {"mean_accuracy", report.mean_accuracy},
          {"std_accuracy", report.std_accuracy},
          {"wall_time_seconds", report.wall_time}};
}

EvalReport eval_report_from_json(const json& j) {
  EvalReport report;
  report.metric = j.at("metric").get<std::string>();
  report.options.folds = j.at("folds").get<int>();
  report.options.repeats = j.at("repeats").get<int>();
  report.options.k = j.at("k").get<int>();
  report.options.seed = j.at("seed").get<std::uint64_t>();
  report.subset = j.at("subset").get<std::vector<std::size_t>>();
  report.fold_accuracy = j.at("per_repeat_fold_accuracy").get<std::vector<std::vector<double>>>();
  report.mean_accuracy = j.at("mean_accuracy").get<double>();
  report.std_accuracy = j.at("std_accuracy").get<double>();
  report.wall_time = j.at("wall_time_seconds").get<double>();
  return report;
}

}  // namespace sfsdfc

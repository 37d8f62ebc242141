#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sfsdfc/dataset.hpp"
#include "sfsdfc/eval.hpp"
#include "sfsdfc/select.hpp"

namespace sfsdfc {

inline constexpr std::string_view kToolVersion = "sfsdfc 0.1.0";

nlohmann::json to_json(const PipelineOptions& options);

/// {tool, dataset, options, config, selected: [{index, name, kind, cluster,
/// reason, relevance_bits}], counts: {continuous, discrete, clusters_cont,
/// clusters_disc}, excluded_constant: [...]}. `counts` gives the number of
/// features of each kind as typed, and the cluster count of each kind.
nlohmann::json selection_to_json(const SelectionResult& result, const Dataset& data, const nlohmann::json& config);

/// Feature indices and names listed in a serialized SelectionResult.
struct SubsetSpec {
  std::string dataset;
  std::vector<std::size_t> indices;
  std::vector<std::string> names;
};

SubsetSpec subset_from_json(const nlohmann::json& selection);

/// [{kind, center, members, radius}, ...] for both kinds.
nlohmann::json clusters_to_json(const SelectionResult& result);

nlohmann::json eval_report_to_json(const EvalReport& report, const nlohmann::json& config);
EvalReport eval_report_from_json(const nlohmann::json& json);

}  // namespace sfsdfc

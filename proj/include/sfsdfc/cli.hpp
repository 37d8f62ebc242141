#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfsdfc/dataset.hpp"
#include "sfsdfc/eval.hpp"
#include "sfsdfc/select.hpp"

namespace sfsdfc::cli {

enum class Command { select, eval, bench };

std::string_view to_string(Command command);

struct RunConfig {
  Command command = Command::select;
  std::filesystem::path input;
  std::optional<std::string> label;
  std::optional<std::filesystem::path> schema;
  std::optional<double> epsilon;
  std::optional<double> beta;
  std::optional<double> gamma;
  ImputePolicy impute = ImputePolicy::mode_or_median;
  int folds = 5;
  int repeats = 10;
  int k = 3;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> subset;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> dump_dissim;
  std::optional<std::filesystem::path> dump_clusters;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// The config fingerprint embedded in every artifact.
nlohmann::json to_json(const RunConfig& config);

/// Throws std::invalid_argument for out-of-range numeric options.
void validate(const RunConfig& config);

PipelineOptions pipeline_options(const RunConfig& config);
CvOptions cv_options(const RunConfig& config);

/// Loads `csv` with the config's label, schema (explicit, else a sibling
/// `<stem>.schema` when present) and epsilon, then imputes.
Dataset load_input(const RunConfig& config, const std::filesystem::path& csv);

/// Writes the file through a temporary sibling and renames it into place.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

/// Keeps the top-`count` features by relevance (ties -> lowest index), ascending.
std::vector<std::size_t> top_k_by_relevance(std::span<const double> relevance, std::size_t count);

// Each command returns the process exit status. Artifacts go to
// config.output, or to `out` when no output path is set; diagnostics go to `err`.
int cmd_select(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int run(int argc, char** argv);

}  // namespace sfsdfc::cli

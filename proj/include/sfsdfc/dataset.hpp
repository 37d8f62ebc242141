#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sfsdfc {

enum class FeatureKind { continuous, discrete };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One feature of a table.
///
/// Continuous columns hold raw numbers. Discrete columns hold integer codes
/// 0..v-1 stored as doubles, with `categories[c]` giving the source text of
/// code c. Missing cells are NaN and flagged in `missing`.
struct FeatureColumn {
  std::string name;
  FeatureKind kind = FeatureKind::continuous;
  std::optional<FeatureKind> declared;  // schema hint; inference never overrides it
  bool textual = false;                 // at least one cell was not a number
  std::vector<double> values;
  std::vector<bool> missing;
  std::vector<std::string> categories;

  std::size_t size() const { return values.size(); }
  bool has_missing() const;
  std::size_t distinct_count() const;  // over non-missing cells

  /// Integer codes of a fully observed discrete column.
  std::vector<int> codes() const;
};

struct Dataset {
  std::string name;
  std::vector<FeatureColumn> features;
  std::vector<int> labels;               // class ids 0..c-1
  std::vector<std::string> class_names;  // text of each class id

  std::size_t n_samples() const { return labels.size(); }
  std::size_t n_features() const { return features.size(); }
  std::size_t n_classes() const { return class_names.size(); }

  std::vector<std::string> feature_names() const;

  /// Copy keeping only the given features, in the given order.
  Dataset subset(std::span<const std::size_t> feature_indices) const;

  /// Throws DatasetError if the structural invariants do not hold.
  void validate() const;
};

enum class ColumnRole { continuous, discrete, label };

/// Sidecar schema: column name -> role.
using Schema = std::map<std::string, ColumnRole, std::less<>>;

/// Reads `column=continuous|discrete|label` lines. Blank lines and lines
/// starting with '#' are ignored.
Schema read_schema(const std::filesystem::path& path);
Schema parse_schema(std::istream& in);

struct LoadOptions {
  /// Header name or zero-based column index. Falls back to the schema's
  /// label entry, then to the last column.
  std::optional<std::string> label_column;
  Schema schema;
};

/// Splits comma-delimited text into rows of trimmed cells. Double-quoted
/// cells may contain commas and doubled quotes. Blank lines are skipped, as
/// are lines starting with `comment` when it is not '\0'.
std::vector<std::vector<std::string>> read_csv_rows(std::istream& in, char comment = '\0');

bool is_missing_cell(std::string_view cell);

Dataset parse_csv(std::istream& in, const LoadOptions& options, std::string name = "dataset");
Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options = {});

double default_epsilon(std::size_t n_samples);

/// A feature is discrete when its distinct non-missing value count is below
/// epsilon (default sqrt(n)). Declared and textual columns keep their kind.
std::vector<FeatureKind> infer_feature_kinds(const Dataset& data,
                                             std::optional<double> epsilon = std::nullopt);

/// Re-types columns, recoding discrete ones to contiguous codes (numeric
/// sources in ascending value order) and decoding numeric codes back to raw
/// values for columns that become continuous.
Dataset with_kinds(Dataset data, std::span<const FeatureKind> kinds);

enum class ImputePolicy { mode_or_median, drop_rows };

std::string_view to_string(ImputePolicy policy);
ImputePolicy parse_impute_policy(std::string_view text);

Dataset impute_missing(Dataset data, ImputePolicy policy);

struct FeatureViews {
  std::vector<std::size_t> continuous;
  std::vector<std::size_t> discrete;
};

FeatureViews split_by_kind(const Dataset& data);

/// Features whose non-missing values are all equal.
std::vector<std::size_t> constant_features(const Dataset& data);

/// z-scores the column in place (population variance). Returns false and
/// zeroes the column when it is constant.
bool standardize_column(std::span<double> column);

struct StandardizedView {
  std::vector<std::size_t> features;          // dataset indices
  std::vector<std::vector<double>> columns;   // one per feature
  std::vector<bool> constant;
};

StandardizedView standardize(const Dataset& data, std::span<const std::size_t> view);

}  // namespace sfsdfc

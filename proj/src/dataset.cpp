#include "sfsdfc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "sfsdfc/log.hpp"

namespace sfsdfc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

// Drops unused codes of a discrete column, keeping category order.
void compact_codes(FeatureColumn& column) {
  std::vector<char> used(column.categories.size(), 0);
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!column.missing[i]) used[static_cast<std::size_t>(column.values[i])] = 1;
  }
  std::vector<int> remap(column.categories.size(), -1);
  std::vector<std::string> kept;
  for (std::size_t c = 0; c < used.size(); ++c) {
    if (used[c]) {
      remap[c] = static_cast<int>(kept.size());
      kept.push_back(std::move(column.categories[c]));
    }
  }
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!column.missing[i]) column.values[i] = remap[static_cast<std::size_t>(column.values[i])];
  }
  column.categories = std::move(kept);
}

void to_discrete(FeatureColumn& column) {
  if (column.kind == FeatureKind::discrete) {
    compact_codes(column);
    return;
  }
  std::vector<double> distinct;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!column.missing[i]) distinct.push_back(column.values[i]);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (column.missing[i]) continue;
    const auto it = std::lower_bound(distinct.begin(), distinct.end(), column.values[i]);
    column.values[i] = static_cast<double>(it - distinct.begin());
  }
  column.categories.clear();
  column.categories.reserve(distinct.size());
  for (double v : distinct) column.categories.push_back(format_number(v));
  column.kind = FeatureKind::discrete;
}

void to_continuous(FeatureColumn& column) {
  if (column.kind == FeatureKind::continuous) return;
  if (column.textual) {
    throw DatasetError("feature '" + column.name + "' has non-numeric values and cannot be continuous");
  }
  std::vector<double> decoded(column.categories.size());
  for (std::size_t c = 0; c < decoded.size(); ++c) decoded[c] = *parse_number(column.categories[c]);
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!column.missing[i]) column.values[i] = decoded[static_cast<std::size_t>(column.values[i])];
  }
  column.categories.clear();
  column.kind = FeatureKind::continuous;
}

// Codes labels (numeric labels in ascending order, text in first-appearance
// order) and fills the dataset's label fields.
void encode_labels(const std::vector<std::string>& cells, Dataset& out) {
  bool numeric = true;
  for (const auto& cell : cells) {
    if (!parse_number(cell)) {
      numeric = false;
      break;
    }
  }
  std::vector<std::string> names;
  if (numeric) {
    std::vector<std::pair<double, std::string>> distinct;
    std::set<double> seen;
    for (const auto& cell : cells) {
      const double v = *parse_number(cell);
      if (seen.insert(v).second) distinct.emplace_back(v, cell);
    }
    std::sort(distinct.begin(), distinct.end());
    for (auto& [v, text] : distinct) names.push_back(text);
    out.labels.reserve(cells.size());
    for (const auto& cell : cells) {
      const double v = *parse_number(cell);
      const auto it = std::find_if(distinct.begin(), distinct.end(),
                                   [v](const auto& entry) { return entry.first == v; });
      out.labels.push_back(static_cast<int>(it - distinct.begin()));
    }
  } else {
    std::unordered_map<std::string, int> ids;
    for (const auto& cell : cells) {
      auto [it, inserted] = ids.emplace(cell, static_cast<int>(names.size()));
      if (inserted) names.push_back(cell);
      out.labels.push_back(it->second);
    }
  }
  out.class_names = std::move(names);
}

void compact_labels(Dataset& data) {
  std::vector<char> used(data.class_names.size(), 0);
  for (int y : data.labels) used[static_cast<std::size_t>(y)] = 1;
  std::vector<int> remap(used.size(), -1);
  std::vector<std::string> kept;
  for (std::size_t c = 0; c < used.size(); ++c) {
    if (used[c]) {
      remap[c] = static_cast<int>(kept.size());
      kept.push_back(data.class_names[c]);
    }
  }
  for (int& y : data.labels) y = remap[static_cast<std::size_t>(y)];
  data.class_names = std::move(kept);
}

std::size_t resolve_label_index(const std::vector<std::string>& header, const LoadOptions& options) {
  std::optional<std::string> wanted = options.label_column;
  if (!wanted) {
    for (const auto& [column, role] : options.schema) {
      if (role != ColumnRole::label) continue;
      if (wanted) throw DatasetError("schema declares more than one label column");
      wanted = column;
    }
  }
  if (!wanted) return header.size() - 1;
  const auto it = std::find(header.begin(), header.end(), *wanted);
  if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  const bool digits = !wanted->empty() &&
                      std::all_of(wanted->begin(), wanted->end(), [](char c) { return c >= '0' && c <= '9'; });
  if (digits) {
    const auto index = std::stoul(*wanted);
    if (index < header.size()) return index;
  }
  throw DatasetError("label column '" + *wanted + "' not found");
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::continuous ? "continuous" : "discrete";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "continuous") return FeatureKind::continuous;
  if (text == "discrete") return FeatureKind::discrete;
  throw std::invalid_argument("unknown feature kind '" + std::string(text) + "'");
}

bool FeatureColumn::has_missing() const {
  return std::find(missing.begin(), missing.end(), true) != missing.end();
}

std::size_t FeatureColumn::distinct_count() const {
  std::vector<double> observed;
  observed.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!missing[i]) observed.push_back(values[i]);
  }
  std::sort(observed.begin(), observed.end());
  return static_cast<std::size_t>(std::unique(observed.begin(), observed.end()) - observed.begin());
}

std::vector<int> FeatureColumn::codes() const {
  if (kind != FeatureKind::discrete) throw std::logic_error("feature '" + name + "' is not discrete");
  if (has_missing()) throw std::logic_error("feature '" + name + "' has missing values");
  std::vector<int> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](double v) { return static_cast<int>(v); });
  return out;
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> names;
  names.reserve(features.size());
  for (const auto& f : features) names.push_back(f.name);
  return names;
}

Dataset Dataset::subset(std::span<const std::size_t> feature_indices) const {
  Dataset out;
  out.name = name;
  out.labels = labels;
  out.class_names = class_names;
  out.features.reserve(feature_indices.size());
  for (std::size_t j : feature_indices) {
    if (j >= features.size()) throw std::out_of_range("feature index " + std::to_string(j) + " out of range");
    out.features.push_back(features[j]);
  }
  return out;
}

void Dataset::validate() const {
  const std::size_t n = n_samples();
  if (n < 2) throw DatasetError("dataset needs at least 2 samples");
  if (features.empty()) throw DatasetError("dataset needs at least 1 feature");
  for (const auto& f : features) {
    if (f.values.size() != n || f.missing.size() != n) {
      throw DatasetError("feature '" + f.name + "' has " + std::to_string(f.values.size()) +
                         " entries, expected " + std::to_string(n));
    }
    if (f.kind == FeatureKind::discrete) {
      for (std::size_t i = 0; i < n; ++i) {
        if (f.missing[i]) continue;
        const double v = f.values[i];
        if (v < 0 || v >= static_cast<double>(f.categories.size()) || v != std::floor(v)) {
          throw DatasetError("feature '" + f.name + "' has an invalid discrete code");
        }
      }
    }
  }
  std::set<int> classes;
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= class_names.size()) throw DatasetError("label id out of range");
    classes.insert(y);
  }
  if (classes.size() < 2) throw DatasetError("degenerate labels: fewer than 2 classes");
}

Schema parse_schema(std::istream& in) {
  Schema schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw DatasetError("schema line " + std::to_string(line_no) + ": expected column=role");
    }
    const auto column = std::string(trim(text.substr(0, eq)));
    const auto role = trim(text.substr(eq + 1));
    if (role == "continuous") {
      schema[column] = ColumnRole::continuous;
    } else if (role == "discrete") {
      schema[column] = ColumnRole::discrete;
    } else if (role == "label") {
      schema[column] = ColumnRole::label;
    } else {
      throw DatasetError("schema line " + std::to_string(line_no) + ": unknown role '" + std::string(role) + "'");
    }
  }
  return schema;
}

Schema read_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot read schema file " + path.string());
  return parse_schema(in);
}

std::vector<std::vector<std::string>> read_csv_rows(std::istream& in, char comment) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool in_quotes = false;

  auto finish_cell = [&] {
    row.push_back(quoted ? cell : std::string(trim(cell)));
    cell.clear();
    quoted = false;
  };
  auto finish_row = [&] {
    finish_cell();
    const bool blank = row.size() == 1 && row.front().empty();
    if (!blank) rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool row_start = row.empty() && cell.empty() && !quoted && (i == 0 || text[i - 1] == '\n');
    if (comment != '\0' && row_start && c == comment) {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"' && trim(cell).empty()) {
      cell.clear();
      quoted = true;
      in_quotes = true;
    } else if (c == ',') {
      finish_cell();
    } else if (c == '\n') {
      finish_row();
    } else if (c != '\r' && !quoted) {
      cell.push_back(c);
    }
  }
  if (in_quotes) throw DatasetError("unterminated quoted cell");
  if (!cell.empty() || !row.empty() || quoted) finish_row();
  return rows;
}

bool is_missing_cell(std::string_view cell) {
  const auto t = trim(cell);
  return t.empty() || t == "?";
}

Dataset parse_csv(std::istream& in, const LoadOptions& options, std::string name) {
  const auto rows = read_csv_rows(in);
  if (rows.empty()) throw DatasetError("no header row");
  const auto& header = rows.front();
  const std::size_t width = header.size();
  if (width < 2) throw DatasetError("need at least one feature column and a label column");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw DatasetError("ragged row " + std::to_string(r) + ": expected " + std::to_string(width) +
                         " cells, got " + std::to_string(rows[r].size()));
    }
  }
  const std::size_t n = rows.size() - 1;
  if (n < 2) throw DatasetError("dataset needs at least 2 samples");

  const std::size_t label_index = resolve_label_index(header, options);
  for (const auto& [column, role] : options.schema) {
    if (std::find(header.begin(), header.end(), column) == header.end()) {
      log_warning("schema column '" + column + "' not present in " + name);
    }
  }

  Dataset data;
  data.name = std::move(name);

  std::vector<std::string> label_cells;
  label_cells.reserve(n);
  for (std::size_t r = 1; r <= n; ++r) {
    if (is_missing_cell(rows[r][label_index])) {
      throw DatasetError("missing label in row " + std::to_string(r));
    }
    label_cells.push_back(rows[r][label_index]);
  }
  encode_labels(label_cells, data);
  if (data.n_classes() < 2) throw DatasetError("degenerate labels: fewer than 2 classes");

  for (std::size_t c = 0; c < width; ++c) {
    if (c == label_index) continue;
    FeatureColumn column;
    column.name = header[c];
    column.values.assign(n, kNaN);
    column.missing.assign(n, false);

    if (const auto it = options.schema.find(column.name); it != options.schema.end()) {
      if (it->second == ColumnRole::label) {
        throw DatasetError("schema marks '" + column.name + "' as label but another column is the label");
      }
      column.declared = it->second == ColumnRole::continuous ? FeatureKind::continuous : FeatureKind::discrete;
    }

    for (std::size_t r = 1; r <= n; ++r) {
      const auto& cell = rows[r][c];
      if (is_missing_cell(cell)) {
        column.missing[r - 1] = true;
      } else if (!parse_number(cell)) {
        column.textual = true;
      }
    }

    if (column.textual) {
      std::unordered_map<std::string, int> ids;
      for (std::size_t r = 1; r <= n; ++r) {
        if (column.missing[r - 1]) continue;
        auto [it, inserted] = ids.emplace(rows[r][c], static_cast<int>(column.categories.size()));
        if (inserted) column.categories.push_back(rows[r][c]);
        column.values[r - 1] = it->second;
      }
      column.kind = FeatureKind::discrete;
      if (column.declared == FeatureKind::continuous) {
        throw DatasetError("feature '" + column.name + "' declared continuous but has non-numeric values");
      }
    } else {
      for (std::size_t r = 1; r <= n; ++r) {
        if (!column.missing[r - 1]) column.values[r - 1] = *parse_number(rows[r][c]);
      }
      column.kind = FeatureKind::continuous;
    }
    data.features.push_back(std::move(column));
  }

  const auto kinds = infer_feature_kinds(data);
  return with_kinds(std::move(data), kinds);
}

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot read " + path.string());
  return parse_csv(in, options, path.stem().string());
}

double default_epsilon(std::size_t n_samples) { return std::sqrt(static_cast<double>(n_samples)); }

std::vector<FeatureKind> infer_feature_kinds(const Dataset& data, std::optional<double> epsilon) {
  const double threshold = epsilon.value_or(default_epsilon(data.n_samples()));
  if (!(threshold > 0)) throw std::invalid_argument("epsilon must be positive");
  std::vector<FeatureKind> kinds;
  kinds.reserve(data.n_features());
  for (const auto& f : data.features) {
    if (f.declared) {
      kinds.push_back(*f.declared);
    } else if (f.textual) {
      kinds.push_back(FeatureKind::discrete);
    } else {
      const auto distinct = static_cast<double>(f.distinct_count());
      kinds.push_back(distinct < threshold ? FeatureKind::discrete : FeatureKind::continuous);
    }
  }
  return kinds;
}

Dataset with_kinds(Dataset data, std::span<const FeatureKind> kinds) {
  if (kinds.size() != data.n_features()) throw std::invalid_argument("one kind per feature required");
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    auto& column = data.features[j];
    if (column.declared && *column.declared != kinds[j]) {
      throw DatasetError("feature '" + column.name + "' is declared " + std::string(to_string(*column.declared)));
    }
    if (kinds[j] == FeatureKind::discrete) {
      to_discrete(column);
    } else {
      to_continuous(column);
    }
  }
  return data;
}

std::string_view to_string(ImputePolicy policy) {
  return policy == ImputePolicy::mode_or_median ? "median-mode" : "drop";
}

ImputePolicy parse_impute_policy(std::string_view text) {
  if (text == "median-mode" || text == "mode-or-median") return ImputePolicy::mode_or_median;
  if (text == "drop" || text == "drop-rows") return ImputePolicy::drop_rows;
  throw std::invalid_argument("unknown impute policy '" + std::string(text) + "'");
}

Dataset impute_missing(Dataset data, ImputePolicy policy) {
  const std::size_t n = data.n_samples();
  if (policy == ImputePolicy::drop_rows) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) {
      const bool complete = std::none_of(data.features.begin(), data.features.end(),
                                         [i](const FeatureColumn& f) { return f.missing[i]; });
      if (complete) keep.push_back(i);
    }
    if (keep.size() == n) return data;
    for (auto& f : data.features) {
      std::vector<double> values;
      values.reserve(keep.size());
      for (std::size_t i : keep) values.push_back(f.values[i]);
      f.values = std::move(values);
      f.missing.assign(keep.size(), false);
      if (f.kind == FeatureKind::discrete) compact_codes(f);
    }
    std::vector<int> labels;
    labels.reserve(keep.size());
    for (std::size_t i : keep) labels.push_back(data.labels[i]);
    data.labels = std::move(labels);
    compact_labels(data);
    if (data.n_samples() < 10) {
      throw DatasetError("dropping rows with missing values leaves " + std::to_string(data.n_samples()) +
                         " samples (minimum 10)");
    }
    if (data.n_classes() < 2) throw DatasetError("dropping rows with missing values leaves fewer than 2 classes");
    return data;
  }

  for (auto& f : data.features) {
    if (!f.has_missing()) continue;
    double fill = 0.0;
    if (f.kind == FeatureKind::discrete) {
      std::vector<std::size_t> counts(std::max<std::size_t>(f.categories.size(), 1), 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (!f.missing[i]) ++counts[static_cast<std::size_t>(f.values[i])];
      }
      if (f.categories.empty()) f.categories.push_back("?");
      fill = static_cast<double>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    } else {
      std::vector<double> observed;
      for (std::size_t i = 0; i < n; ++i) {
        if (!f.missing[i]) observed.push_back(f.values[i]);
      }
      if (!observed.empty()) {
        std::sort(observed.begin(), observed.end());
        const std::size_t mid = observed.size() / 2;
        fill = observed.size() % 2 == 1 ? observed[mid] : 0.5 * (observed[mid - 1] + observed[mid]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (f.missing[i]) {
        f.values[i] = fill;
        f.missing[i] = false;
      }
    }
  }
  return data;
}

FeatureViews split_by_kind(const Dataset& data) {
  FeatureViews views;
  for (std::size_t j = 0; j < data.n_features(); ++j) {
    (data.features[j].kind == FeatureKind::continuous ? views.continuous : views.discrete).push_back(j);
  }
  return views;
}

std::vector<std::size_t> constant_features(const Dataset& data) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < data.n_features(); ++j) {
    const auto& f = data.features[j];
    std::optional<double> first;
    bool constant = true;
    for (std::size_t i = 0; i < f.size() && constant; ++i) {
      if (f.missing[i]) continue;
      if (!first) first = f.values[i];
      constant = f.values[i] == *first;
    }
    if (constant) out.push_back(j);
  }
  return out;
}

bool standardize_column(std::span<double> column) {
  if (column.empty()) return false;
  const bool constant = std::all_of(column.begin(), column.end(), [&](double v) { return v == column.front(); });
  if (constant) {
    std::fill(column.begin(), column.end(), 0.0);
    return false;
  }
  const double n = static_cast<double>(column.size());
  const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : column) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  for (double& v : column) v = (v - mean) / sd;
  return true;
}

StandardizedView standardize(const Dataset& data, std::span<const std::size_t> view) {
  StandardizedView out;
  out.features.assign(view.begin(), view.end());
  out.columns.reserve(view.size());
  out.constant.reserve(view.size());
  for (std::size_t j : view) {
    const auto& f = data.features.at(j);
    if (f.kind != FeatureKind::continuous) throw std::invalid_argument("feature '" + f.name + "' is not continuous");
    if (f.has_missing()) throw std::invalid_argument("feature '" + f.name + "' has missing values");
    auto column = f.values;
    out.constant.push_back(!standardize_column(column));
    out.columns.push_back(std::move(column));
  }
  return out;
}

}  // namespace sfsdfc

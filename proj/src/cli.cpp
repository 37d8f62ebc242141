#include "sfsdfc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "sfsdfc/log.hpp"
#include "sfsdfc/report.hpp"

namespace sfsdfc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& value) {
  if (!value) return nullptr;
  if constexpr (std::is_same_v<T, fs::path>) {
    return value->string();
  } else {
    return *value;
  }
}

std::string format_double(double value) {
  std::ostringstream s;
  s.precision(6);
  s << std::fixed << value;
  return s.str();
}

fs::path with_kind_suffix(const fs::path& path, FeatureKind kind) {
  auto out = path;
  out.replace_filename(path.stem().string() + "." + std::string(to_string(kind)) + path.extension().string());
  return out;
}

void emit(const RunConfig& config, const std::string& contents, std::ostream& out) {
  if (config.output) {
    write_file_atomically(*config.output, contents);
  } else {
    out << contents;
  }
}

void dump_matrix(const fs::path& path, const DissimilarityMatrix& matrix, std::span<const std::size_t> view,
                 const Dataset& data) {
  std::vector<std::string> names;
  for (std::size_t j : view) names.push_back(data.features[j].name);
  std::ostringstream s;
  write_matrix_csv(s, matrix, names);
  write_file_atomically(path, s.str());
}

struct BenchRow {
  std::string dataset;
  std::size_t n_features = 0;
  std::size_t selected = 0;
  double acc_sfsdfc = 0.0;
  double acc_full = 0.0;
  double acc_mi = 0.0;
  double select_seconds = 0.0;
  double eval_seconds = 0.0;
};

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::select:
      return "select";
    case Command::eval:
      return "eval";
    case Command::bench:
      return "bench";
  }
  return "?";
}

json to_json(const RunConfig& c) {
  return {{"command", to_string(c.command)},
          {"input", c.input.string()},
          {"label", optional_json(c.label)},
          {"schema", optional_json(c.schema)},
          {"epsilon", optional_json(c.epsilon)},
          {"beta", optional_json(c.beta)},
          {"gamma", optional_json(c.gamma)},
          {"impute", to_string(c.impute)},
          {"folds", c.folds},
          {"repeats", c.repeats},
          {"k", c.k},
          {"seed", c.seed},
          {"subset", optional_json(c.subset)},
          {"output", optional_json(c.output)},
          {"dump_dissim", optional_json(c.dump_dissim)},
          {"dump_clusters", optional_json(c.dump_clusters)},
          {"threads", c.threads},
          {"metric", "heom"},
          {"tool", kToolVersion}};
}

void validate(const RunConfig& c) {
  if (c.input.empty()) throw std::invalid_argument("--input is required");
  if (c.epsilon && !(*c.epsilon > 0)) throw std::invalid_argument("--epsilon must be positive");
  if (c.beta && !(*c.beta > 0)) throw std::invalid_argument("--beta must be positive");
  if (c.gamma && !(*c.gamma > 0)) throw std::invalid_argument("--gamma must be positive");
  if (c.folds < 2) throw std::invalid_argument("--folds must be at least 2");
  if (c.repeats < 1) throw std::invalid_argument("--repeats must be at least 1");
  if (c.k < 1) throw std::invalid_argument("--k must be at least 1");
}

PipelineOptions pipeline_options(const RunConfig& c) {
  PipelineOptions options;
  options.beta = c.beta;
  options.gamma = c.gamma;
  options.threads = c.threads;
  return options;
}

CvOptions cv_options(const RunConfig& c) {
  CvOptions options;
  options.folds = c.folds;
  options.repeats = c.repeats;
  options.k = c.k;
  options.seed = c.seed;
  options.threads = c.threads;
  return options;
}

Dataset load_input(const RunConfig& config, const fs::path& csv) {
  if (!fs::is_regular_file(csv)) throw DatasetError("cannot read " + csv.string());
  LoadOptions load;
  load.label_column = config.label;
  if (config.schema) {
    load.schema = read_schema(*config.schema);
  } else if (auto sidecar = fs::path(csv).replace_extension(".schema"); fs::is_regular_file(sidecar)) {
    load.schema = read_schema(sidecar);
  }
  Dataset data = load_csv(csv, load);
  if (config.epsilon) data = with_kinds(std::move(data), infer_feature_kinds(data, config.epsilon));
  data = impute_missing(std::move(data), config.impute);
  data.validate();
  return data;
}

void write_file_atomically(const fs::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << contents;
    file.close();
    if (!file) throw std::runtime_error("failed writing " + path.string());
  }
  fs::rename(tmp, path);
}

std::vector<std::size_t> top_k_by_relevance(std::span<const double> relevance, std::size_t count) {
  std::vector<std::size_t> order(relevance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return relevance[a] > relevance[b]; });
  order.resize(std::min(count, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

int cmd_select(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const Dataset data = load_input(config, config.input);
    const auto result = run_pipeline(data, pipeline_options(config));

    if (config.dump_dissim) {
      if (!result.continuous_view.empty()) {
        dump_matrix(with_kind_suffix(*config.dump_dissim, FeatureKind::continuous), result.continuous_matrix,
                    result.continuous_view, data);
      }
      if (!result.discrete_view.empty()) {
        dump_matrix(with_kind_suffix(*config.dump_dissim, FeatureKind::discrete), result.discrete_matrix,
                    result.discrete_view, data);
      }
    }
    if (config.dump_clusters) write_file_atomically(*config.dump_clusters, clusters_to_json(result).dump(2) + "\n");

    emit(config, selection_to_json(result, data, to_json(config)).dump(2) + "\n", out);
    auto& summary = config.output ? out : err;
    summary << data.name << ": m=" << data.n_features() << " clusters(cont)=" << result.continuous.clusters.size()
            << " clusters(disc)=" << result.discrete.clusters.size() << " selected=" << result.selected.size() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const Dataset data = load_input(config, config.input);
    std::vector<std::size_t> subset(data.n_features());
    std::iota(subset.begin(), subset.end(), std::size_t{0});
    if (config.subset) {
      std::ifstream in(*config.subset);
      if (!in) throw std::runtime_error("cannot read " + config.subset->string());
      const auto spec = subset_from_json(json::parse(in));
      for (std::size_t i = 0; i < spec.indices.size(); ++i) {
        const auto j = spec.indices[i];
        if (j >= data.n_features()) {
          throw std::invalid_argument("subset index " + std::to_string(j) + " out of range for " +
                                      std::to_string(data.n_features()) + " features");
        }
        if (!spec.names[i].empty() && spec.names[i] != data.features[j].name) {
          throw std::invalid_argument("subset feature " + std::to_string(j) + " is '" + spec.names[i] +
                                      "' but the dataset has '" + data.features[j].name + "'");
        }
      }
      subset = spec.indices;
      if (subset.empty()) throw std::invalid_argument("subset is empty");
    }
    const auto report = cross_validate(data, subset, cv_options(config));
    emit(config, eval_report_to_json(report, to_json(config)).dump(2) + "\n", out);
    auto& summary = config.output ? out : err;
    summary << data.name << ": features=" << subset.size() << " accuracy=" << format_double(report.mean_accuracy)
            << " +- " << format_double(report.std_accuracy) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (!fs::is_directory(config.input)) throw std::runtime_error("not a directory: " + config.input.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config.input)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .csv datasets in " + config.input.string());

    const auto cv = cv_options(config);
    std::vector<BenchRow> rows;
    for (const auto& file : files) {
      try {
        const Dataset data = load_input(config, file);
        BenchRow row;
        row.dataset = data.name;
        row.n_features = data.n_features();

        auto t0 = std::chrono::steady_clock::now();
        const auto selection = run_pipeline(data, pipeline_options(config));
        row.select_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.selected = selection.selected.size();

        t0 = std::chrono::steady_clock::now();
        std::vector<std::size_t> full(data.n_features());
        std::iota(full.begin(), full.end(), std::size_t{0});
        const auto relevance = feature_relevance(data, selection.bins, config.threads);
        const auto top = top_k_by_relevance(relevance, row.selected);
        row.acc_sfsdfc = cross_validate(data, selection.selected, cv).mean_accuracy;
        row.acc_full = cross_validate(data, full, cv).mean_accuracy;
        row.acc_mi = cross_validate(data, top, cv).mean_accuracy;
        row.eval_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(row);
      } catch (const std::exception& e) {
        log_warning("skipping " + file.string() + ": " + e.what());
      }
    }
    if (rows.empty()) throw std::runtime_error("every dataset failed to load or evaluate");

    std::vector<std::vector<double>> table;
    for (const auto& r : rows) table.push_back({r.acc_sfsdfc, r.acc_full, r.acc_mi});
    const auto ranks = mean_ranks(table, {"SFSDFC", "Full", "MI-top-k"});

    std::ostringstream csv;
    csv << "# " << kToolVersion << "\n";
    csv << "# config: " << to_json(config).dump() << "\n";
    csv << "dataset,SFSDFC,Full,MI-top-k,selected,features,select_seconds,eval_seconds\n";
    for (const auto& r : rows) {
      csv << r.dataset << ',' << format_double(r.acc_sfsdfc) << ',' << format_double(r.acc_full) << ','
          << format_double(r.acc_mi) << ',' << r.selected << ',' << r.n_features << ','
          << format_double(r.select_seconds) << ',' << format_double(r.eval_seconds) << "\n";
    }
    csv << "mean_ranks," << format_double(ranks.mean_ranks[0]) << ',' << format_double(ranks.mean_ranks[1]) << ','
        << format_double(ranks.mean_ranks[2]) << ",,,,\n";
    emit(config, csv.str(), out);
    if (config.output) out << "bench: " << rows.size() << " of " << files.size() << " datasets evaluated\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Supervised feature selection for mixed continuous/discrete data via density-based feature clustering"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  RunConfig config;
  std::string impute = "median-mode";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "CSV file (bench: directory of CSV files)")->required();
    sub->add_option("--label", config.label, "Label column name or zero-based index");
    sub->add_option("--schema", config.schema, "Sidecar schema: column=continuous|discrete|label per line");
    sub->add_option("--epsilon", config.epsilon, "Distinct-value threshold for discrete typing (default sqrt(n))");
    sub->add_option("--beta", config.beta, "Kernel normalization parameter (default: mean dissimilarity)");
    sub->add_option("--gamma", config.gamma, "Kernel stabilization parameter (default 2)");
    sub->add_option("--impute", impute, "Missing values: median-mode or drop")
        ->check(CLI::IsMember({"median-mode", "drop"}));
    sub->add_option("--folds", config.folds, "Cross-validation folds")->capture_default_str();
    sub->add_option("--repeats", config.repeats, "Cross-validation repeats")->capture_default_str();
    sub->add_option("--k", config.k, "Neighbours for kNN")->capture_default_str();
    sub->add_option("--seed", config.seed, "Seed; repeat r uses seed + r")->capture_default_str();
    sub->add_option("--output", config.output, "Output file (default: stdout)");
    sub->add_option("--threads", config.threads, "Worker threads (0 = all cores)")->capture_default_str();
  };

  auto* select = app.add_subcommand("select", "Select a feature subset and write it as JSON");
  add_common(select);
  select->add_option("--dump-dissim", config.dump_dissim, "Write dissimilarity matrices (one CSV per kind)");
  select->add_option("--dump-clusters", config.dump_clusters, "Write the feature clusters as JSON");

  auto* eval = app.add_subcommand("eval", "Cross-validate 3-NN on a feature subset");
  add_common(eval);
  eval->add_option("--subset", config.subset, "Selection JSON written by 'select' (default: all features)");

  auto* bench = app.add_subcommand("bench", "Select and evaluate every dataset in a directory; CSV report");
  add_common(bench);

  CLI11_PARSE(app, argc, argv);
  config.impute = parse_impute_policy(impute);

  if (select->parsed()) {
    config.command = Command::select;
    return cmd_select(config, std::cout, std::cerr);
  }
  if (eval->parsed()) {
    config.command = Command::eval;
    return cmd_eval(config, std::cout, std::cerr);
  }
  config.command = Command::bench;
  return cmd_bench(config, std::cout, std::cerr);
}

}  // namespace sfsdfc::cli

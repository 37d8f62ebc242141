#include "sfsdfc/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sfsdfc/log.hpp"
#include "sfsdfc/parallel.hpp"

namespace sfsdfc {

namespace {

// Uniform integer in [0, bound) by rejection; unlike
// std::uniform_int_distribution this is identical across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

double squared_distance(MixedSample a, MixedSample b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.continuous.size(); ++i) {
    const double d = a.continuous[i] - b.continuous[i];
    sum += d * d;
  }
  for (std::size_t i = 0; i < a.discrete.size(); ++i) sum += a.discrete[i] != b.discrete[i] ? 1.0 : 0.0;
  return sum;
}

}  // namespace

double mixed_distance(MixedSample a, MixedSample b) {
  if (a.continuous.size() != b.continuous.size() || a.discrete.size() != b.discrete.size()) {
    throw std::invalid_argument("samples have different shapes");
  }
  return std::sqrt(squared_distance(a, b));
}

Standardizer fit_standardizer(const Dataset& data, std::span<const std::size_t> subset,
                              std::span<const std::size_t> train_rows) {
  if (train_rows.empty()) throw std::invalid_argument("empty training split");
  Standardizer s;
  const double n = static_cast<double>(train_rows.size());
  for (std::size_t j : subset) {
    const auto& f = data.features.at(j);
    if (f.kind != FeatureKind::continuous) continue;
    double mean = 0.0;
    for (std::size_t r : train_rows) mean += f.values[r];
    mean /= n;
    double ss = 0.0;
    for (std::size_t r : train_rows) ss += (f.values[r] - mean) * (f.values[r] - mean);
    const double sd = std::sqrt(ss / n);
    s.mean.push_back(mean);
    s.scale.push_back(sd > 0 ? sd : 1.0);
  }
  return s;
}

EncodedTable::EncodedTable(const Dataset& data, std::span<const std::size_t> subset,
                           std::span<const std::size_t> rows, const Standardizer& standardizer)
    : rows_(rows.size()) {
  std::vector<const FeatureColumn*> cont;
  std::vector<const FeatureColumn*> disc;
  for (std::size_t j : subset) {
    const auto& f = data.features.at(j);
    (f.kind == FeatureKind::continuous ? cont : disc).push_back(&f);
  }
  if (standardizer.mean.size() != cont.size()) throw std::invalid_argument("standardizer does not match subset");
  n_cont_ = cont.size();
  n_disc_ = disc.size();
  cont_.reserve(rows_ * n_cont_);
  disc_.reserve(rows_ * n_disc_);
  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < n_cont_; ++c) {
      cont_.push_back((cont[c]->values[r] - standardizer.mean[c]) / standardizer.scale[c]);
    }
    for (const auto* f : disc) disc_.push_back(static_cast<int>(f->values[r]));
  }
}

MixedSample EncodedTable::row(std::size_t i) const {
  return {std::span<const double>(cont_.data() + i * n_cont_, n_cont_),
          std::span<const int>(disc_.data() + i * n_disc_, n_disc_)};
}

int knn_predict(const EncodedTable& train, std::span<const int> train_labels, MixedSample query, int k) {
  if (train.rows() == 0) throw std::invalid_argument("empty training set");
  if (train_labels.size() != train.rows()) throw std::invalid_argument("one label per training row required");
  if (k < 1 || static_cast<std::size_t>(k) > train.rows()) throw std::invalid_argument("k must lie in [1, |train|]");

  std::vector<std::pair<double, std::size_t>> neighbours(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) neighbours[i] = {squared_distance(query, train.row(i)), i};
  std::partial_sort(neighbours.begin(), neighbours.begin() + k, neighbours.end());

  const int classes = *std::max_element(train_labels.begin(), train_labels.end()) + 1;
  std::vector<int> votes(static_cast<std::size_t>(classes), 0);
  for (int i = 0; i < k; ++i) ++votes[static_cast<std::size_t>(train_labels[neighbours[static_cast<std::size_t>(i)].second])];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<int> stratified_kfold(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("folds must be at least 2");
  if (static_cast<std::size_t>(folds) > labels.size()) throw std::invalid_argument("more folds than samples");

  const int classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<int> fold(labels.size(), 0);
  std::size_t position = 0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    auto& idx = members[c];
    if (!idx.empty() && idx.size() < static_cast<std::size_t>(folds)) {
      log_warning("class " + std::to_string(c) + " has " + std::to_string(idx.size()) + " samples, fewer than " +
                  std::to_string(folds) + " folds");
    }
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_below(rng, i)]);
    for (std::size_t i : idx) fold[i] = static_cast<int>(position++ % static_cast<std::size_t>(folds));
  }
  return fold;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("prediction and truth lengths differ");
  if (truth.empty()) throw std::invalid_argument("accuracy of an empty set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

EvalReport cross_validate(const Dataset& data, std::span<const std::size_t> subset, const CvOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (subset.empty()) throw std::invalid_argument("feature subset is empty");
  if (options.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  for (std::size_t j : subset) {
    if (j >= data.n_features()) throw std::out_of_range("feature index " + std::to_string(j) + " out of range");
    if (data.features[j].has_missing()) throw DatasetError("feature '" + data.features[j].name + "' has missing values");
  }

  const auto repeats = static_cast<std::size_t>(options.repeats);
  const auto folds = static_cast<std::size_t>(options.folds);
  std::vector<std::vector<int>> assignments;
  for (std::size_t r = 0; r < repeats; ++r) assignments.push_back(stratified_kfold(data.labels, options.folds, options.seed + r));

  EvalReport report;
  report.options = options;
  report.subset.assign(subset.begin(), subset.end());
  report.fold_accuracy.assign(repeats, std::vector<double>(folds, 0.0));

  parallel_for(repeats * folds, options.threads, [&](std::size_t slot) {
    const std::size_t r = slot / folds;
    const int f = static_cast<int>(slot % folds);
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < data.n_samples(); ++i) (assignments[r][i] == f ? test_rows : train_rows).push_back(i);
    if (test_rows.empty()) throw std::invalid_argument("empty test fold");

    const auto standardizer = fit_standardizer(data, subset, train_rows);
    const EncodedTable train(data, subset, train_rows, standardizer);
    const EncodedTable test(data, subset, test_rows, standardizer);
    std::vector<int> train_labels;
    train_labels.reserve(train_rows.size());
    for (std::size_t i : train_rows) train_labels.push_back(data.labels[i]);

    std::vector<int> predicted;
    std::vector<int> truth;
    for (std::size_t t = 0; t < test_rows.size(); ++t) {
      predicted.push_back(knn_predict(train, train_labels, test.row(t), options.k));
      truth.push_back(data.labels[test_rows[t]]);
    }
    report.fold_accuracy[r][static_cast<std::size_t>(f)] = accuracy(predicted, truth);
  });

  double sum = 0.0;
  for (const auto& row : report.fold_accuracy) sum += std::accumulate(row.begin(), row.end(), 0.0);
  const double count = static_cast<double>(repeats * folds);
  report.mean_accuracy = sum / count;
  double ss = 0.0;
  for (const auto& row : report.fold_accuracy) {
    for (double a : row) ss += (a - report.mean_accuracy) * (a - report.mean_accuracy);
  }
  report.std_accuracy = std::sqrt(ss / count);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RankTable mean_ranks(const std::vector<std::vector<double>>& accuracy, std::vector<std::string> methods) {
  const std::size_t m = methods.size();
  if (m < 2) throw std::invalid_argument("at least 2 methods required");
  if (accuracy.empty()) throw std::invalid_argument("at least 1 dataset required");

  RankTable table;
  table.methods = std::move(methods);
  table.mean_ranks.assign(m, 0.0);
  for (const auto& row : accuracy) {
    if (row.size() != m) throw std::invalid_argument("one accuracy per method required");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    std::vector<double> ranks(m, 0.0);
    for (std::size_t i = 0; i < m;) {
      std::size_t j = i;
      while (j + 1 < m && row[order[j + 1]] == row[order[i]]) ++j;
      const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
      i = j + 1;
    }
    for (std::size_t t = 0; t < m; ++t) table.mean_ranks[t] += ranks[t];
    table.ranks.push_back(std::move(ranks));
  }
  for (double& r : table.mean_ranks) r /= static_cast<double>(accuracy.size());
  return table;
}

}  // namespace sfsdfc

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sfsdfc/dataset.hpp"

namespace sfsdfc {

/// One sample restricted to a feature subset: standardized continuous values
/// and discrete codes.
struct MixedSample {
  std::span<const double> continuous;
  std::span<const int> discrete;
};

/// Heterogeneous Euclidean-overlap metric: Euclidean over continuous values
/// plus a 0/1 mismatch per discrete value.
double mixed_distance(MixedSample a, MixedSample b);

/// Per-feature centering and scaling fitted on training rows only. Constant
/// training columns get scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;
};

/// Rows of a dataset restricted to a feature subset, laid out row-major.
class EncodedTable {
 public:
  EncodedTable() = default;
  EncodedTable(const Dataset& data, std::span<const std::size_t> subset, std::span<const std::size_t> rows,
               const Standardizer& standardizer);

  std::size_t rows() const { return rows_; }
  std::size_t continuous_width() const { return n_cont_; }
  std::size_t discrete_width() const { return n_disc_; }
  MixedSample row(std::size_t i) const;

 private:
  std::size_t rows_ = 0;
  std::size_t n_cont_ = 0;
  std::size_t n_disc_ = 0;
  std::vector<double> cont_;
  std::vector<int> disc_;
};

/// Fits on the continuous features of `subset`, using only `train_rows`.
Standardizer fit_standardizer(const Dataset& data, std::span<const std::size_t> subset,
                              std::span<const std::size_t> train_rows);

/// Majority vote of the k nearest training rows. Distance ties go to the
/// lower training row; vote ties go to the smallest class id.
int knn_predict(const EncodedTable& train, std::span<const int> train_labels, MixedSample query, int k);

/// Fold id per sample. Classes are shuffled in ascending id order by one
/// mt19937_64 seeded with `seed`, then dealt round-robin, each class
/// continuing where the previous one stopped, so fold sizes differ by at most one.
std::vector<int> stratified_kfold(std::span<const int> labels, int folds, std::uint64_t seed);

/// Fraction of positions where predicted equals truth.
double accuracy(std::span<const int> predicted, std::span<const int> truth);

struct CvOptions {
  int folds = 5;
  int repeats = 10;
  int k = 3;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct EvalReport {
  std::vector<std::vector<double>> fold_accuracy;  // repeats x folds
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population std over all folds
  std::vector<std::size_t> subset;
  double wall_time = 0.0;  // seconds
  CvOptions options;
  std::string metric = "heom";

  std::size_t subset_size() const { return subset.size(); }
};

/// Repeat r uses seed + r for its folds. Continuous features are standardized
/// with statistics of each fold's training split.
EvalReport cross_validate(const Dataset& data, std::span<const std::size_t> subset, const CvOptions& options);

struct RankTable {
  std::vector<std::string> methods;
  std::vector<std::vector<double>> ranks;  // dataset x method, 1 = best, ties averaged
  std::vector<double> mean_ranks;
};

/// accuracy is dataset x method.
RankTable mean_ranks(const std::vector<std::vector<double>>& accuracy, std::vector<std::string> methods);

}  // namespace sfsdfc

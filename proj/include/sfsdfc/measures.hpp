#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sfsdfc/dataset.hpp"

namespace sfsdfc {

// Continuous features. Variances use the population convention (divide by n).

/// Product-moment correlation, clamped to [-1, 1]. Throws
/// std::invalid_argument for a constant column or mismatched lengths.
double pearson(std::span<const double> a, std::span<const double> b);

/// Maximal information compression index: twice the smallest eigenvalue of
/// the 2x2 covariance matrix of (a, b).
double mici(std::span<const double> a, std::span<const double> b);

/// mici(a, b) / 2 on standardized columns, i.e. 1 - |rho|, in [0, 1].
double cont_dissimilarity(std::span<const double> a, std::span<const double> b);

// Discrete features: integer codes >= 0. All information quantities are in bits.

double entropy(std::span<const int> codes);

/// H(a) - H(a|b); symmetric, equal to the mutual information I(a; b).
double information_gain(std::span<const int> a, std::span<const int> b);

/// Symmetrical uncertainty 2 I(a;b) / (H(a) + H(b)). Defined as 0 when both
/// columns are constant.
double su(std::span<const int> a, std::span<const int> b);

double disc_dissimilarity(std::span<const int> a, std::span<const int> b);

/// Equal-frequency binning into at most min(bins, distinct values) codes.
/// Equal values always share a bin; codes follow value order.
std::vector<int> discretize(std::span<const double> values, int bins);

/// ceil(sqrt(n)), at least 2.
int default_bins(std::size_t n_samples);

/// I(Y; f) = H(Y) - H(Y | f).
double relevance_mi(std::span<const int> feature, std::span<const int> labels);

/// Relevance of a dataset column; continuous columns are discretized first.
double relevance_mi(const FeatureColumn& column, std::span<const int> labels, int bins);

/// Dense symmetric matrix of pairwise feature dissimilarities for one kind.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  DissimilarityMatrix(std::size_t size, FeatureKind kind);

  std::size_t size() const { return size_; }
  FeatureKind kind() const { return kind_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }

  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * size_, size_}; }

  friend bool operator==(const DissimilarityMatrix&, const DissimilarityMatrix&) = default;

 private:
  std::size_t size_ = 0;
  FeatureKind kind_ = FeatureKind::continuous;
  std::vector<double> values_;
};

/// Continuous view: columns must already be standardized and non-constant.
/// Each unordered pair is computed once; thread count does not change the result.
DissimilarityMatrix dissimilarity_matrix(const std::vector<std::vector<double>>& standardized,
                                         unsigned threads = 1);

/// Discrete view of integer-coded columns.
DissimilarityMatrix dissimilarity_matrix(const std::vector<std::vector<int>>& codes, unsigned threads = 1);

/// CSV dump: header "feature,<names...>", then one row per feature.
void write_matrix_csv(std::ostream& out, const DissimilarityMatrix& matrix, std::span<const std::string> names);

}  // namespace sfsdfc

#include "sfsdfc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "sfsdfc/parallel.hpp"

namespace sfsdfc {

namespace {

struct Moments {
  double var_a = 0.0;
  double var_b = 0.0;
  double cov = 0.0;
};

Moments moments(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("columns differ in length");
  if (a.size() < 2) throw std::invalid_argument("columns need at least 2 values");
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  Moments m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    m.var_a += da * da;
    m.var_b += db * db;
    m.cov += da * db;
  }
  m.var_a /= n;
  m.var_b /= n;
  m.cov /= n;
  return m;
}

bool is_constant(std::span<const double> column) {
  return std::all_of(column.begin(), column.end(), [&](double v) { return v == column.front(); });
}

double correlation(const Moments& m) {
  return std::clamp(m.cov / std::sqrt(m.var_a * m.var_b), -1.0, 1.0);
}

void check_non_constant(std::span<const double> a, std::span<const double> b) {
  if (is_constant(a) || is_constant(b)) throw std::invalid_argument("constant column");
}

std::size_t alphabet_size(std::span<const int> codes) {
  int top = -1;
  for (int c : codes) {
    if (c < 0) throw std::invalid_argument("discrete codes must be non-negative");
    top = std::max(top, c);
  }
  return static_cast<std::size_t>(top + 1);
}

// Sum over non-empty cells of (c/n) log2(n/c).
double entropy_of_counts(std::span<const std::size_t> counts, std::size_t total) {
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h += p * std::log2(n / static_cast<double>(c));
  }
  return h;
}

double joint_entropy(std::span<const int> a, std::span<const int> b) {
  const std::size_t va = alphabet_size(a);
  const std::size_t vb = alphabet_size(b);
  std::vector<std::size_t> counts(va * vb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++counts[static_cast<std::size_t>(a[i]) * vb + static_cast<std::size_t>(b[i])];
  }
  return entropy_of_counts(counts, a.size());
}

}  // namespace

double pearson(std::span<const double> a, std::span<const double> b) {
  const auto m = moments(a, b);
  check_non_constant(a, b);
  return correlation(m);
}

double mici(std::span<const double> a, std::span<const double> b) {
  const auto m = moments(a, b);
  check_non_constant(a, b);
  const double rho = correlation(m);
  const double sum = m.var_a + m.var_b;
  const double radicand = sum * sum - 4.0 * m.var_a * m.var_b * (1.0 - rho * rho);
  return std::max(0.0, sum - std::sqrt(std::max(0.0, radicand)));
}

double cont_dissimilarity(std::span<const double> a, std::span<const double> b) {
  return std::clamp(mici(a, b) / 2.0, 0.0, 1.0);
}

double entropy(std::span<const int> codes) {
  if (codes.empty()) return 0.0;
  std::vector<std::size_t> counts(alphabet_size(codes), 0);
  for (int c : codes) ++counts[static_cast<std::size_t>(c)];
  return entropy_of_counts(counts, codes.size());
}

double information_gain(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("columns differ in length");
  if (a.empty()) return 0.0;
  // Canonical argument order.
  if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) std::swap(a, b);
  const double ha = entropy(a);
  const double hb = entropy(b);
  const double gain = ha + hb - joint_entropy(a, b);
  return std::clamp(gain, 0.0, std::min(ha, hb));
}

double su(std::span<const int> a, std::span<const int> b) {
  const double denom = entropy(a) + entropy(b);
  if (denom <= 0.0) return 0.0;
  return std::clamp(2.0 * information_gain(a, b) / denom, 0.0, 1.0);
}

double disc_dissimilarity(std::span<const int> a, std::span<const int> b) { return 1.0 - su(a, b); }

std::vector<int> discretize(std::span<const double> values, int bins) {
  if (bins < 2) throw std::invalid_argument("bins must be at least 2");
  const std::size_t n = values.size();
  if (n == 0) return {};
  const auto b = static_cast<std::size_t>(bins);

  std::vector<std::pair<double, std::size_t>> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = {values[i], i};
  std::sort(sorted.begin(), sorted.end());

  // A value with c smaller values lands in bin floor(c * b / n); used bins
  // are numbered in ascending order.
  std::vector<int> codes(n);
  std::size_t smaller = 0;
  std::size_t last_bin = 0;
  int code = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && sorted[r].first != sorted[r - 1].first) {
      smaller = r;
      const std::size_t bin = smaller * b / n;
      if (bin != last_bin) {
        last_bin = bin;
        ++code;
      }
    }
    codes[sorted[r].second] = code;
  }
  return codes;
}

int default_bins(std::size_t n_samples) {
  return std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_samples)))));
}

double relevance_mi(std::span<const int> feature, std::span<const int> labels) {
  return information_gain(labels, feature);
}

double relevance_mi(const FeatureColumn& column, std::span<const int> labels, int bins) {
  if (column.kind == FeatureKind::discrete) return relevance_mi(column.codes(), labels);
  if (column.has_missing()) throw std::invalid_argument("feature '" + column.name + "' has missing values");
  return relevance_mi(discretize(column.values, bins), labels);
}

DissimilarityMatrix::DissimilarityMatrix(std::size_t size, FeatureKind kind)
    : size_(size), kind_(kind), values_(size * size, 0.0) {}

void DissimilarityMatrix::set(std::size_t i, std::size_t j, double value) {
  values_[i * size_ + j] = value;
  values_[j * size_ + i] = value;
}

namespace {

template <typename Column, typename Measure>
DissimilarityMatrix pairwise(const std::vector<Column>& columns, FeatureKind kind, unsigned threads,
                             Measure measure) {
  const std::size_t m = columns.size();
  DissimilarityMatrix matrix(m, kind);
  // Row i owns pairs (i, j > i); every cell is written by exactly one task.
  parallel_for(m, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < m; ++j) matrix.set(i, j, measure(columns[i], columns[j]));
  });
  return matrix;
}

}  // namespace

DissimilarityMatrix dissimilarity_matrix(const std::vector<std::vector<double>>& standardized, unsigned threads) {
  return pairwise(standardized, FeatureKind::continuous, threads,
                  [](const std::vector<double>& a, const std::vector<double>& b) { return cont_dissimilarity(a, b); });
}

DissimilarityMatrix dissimilarity_matrix(const std::vector<std::vector<int>>& codes, unsigned threads) {
  return pairwise(codes, FeatureKind::discrete, threads,
                  [](const std::vector<int>& a, const std::vector<int>& b) { return disc_dissimilarity(a, b); });
}

void write_matrix_csv(std::ostream& out, const DissimilarityMatrix& matrix, std::span<const std::string> names) {
  if (names.size() != matrix.size()) throw std::invalid_argument("one name per matrix row required");
  const auto old_precision = out.precision(17);
  out << "feature";
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << names[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) out << ',' << matrix(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace sfsdfc

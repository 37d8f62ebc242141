#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sfsdfc/dataset.hpp"
#include "synthetic.hpp"

using namespace sfsdfc;

namespace {

Dataset parse(const std::string& text, LoadOptions options = {}) {
  std::istringstream in(text);
  return parse_csv(in, options, "inline");
}

std::string numeric_table(std::size_t n, std::size_t distinct) {
  std::ostringstream out;
  out << "f,y\n";
  for (std::size_t i = 0; i < n; ++i) out << (i % distinct) << ',' << (i % 2) << '\n';
  return out.str();
}

}  // namespace

TEST_CASE("load: four rows, two features and a label") {
  const auto d = parse("a,b,class\n1.5,x,yes\n2.5,y,no\n3.5,x,yes\n4.5,z,no\n");
  CHECK(d.n_samples() == 4);
  CHECK(d.n_features() == 2);
  CHECK(d.n_classes() == 2);
  CHECK(d.feature_names() == std::vector<std::string>{"a", "b"});
  CHECK(d.labels == std::vector<int>{0, 1, 0, 1});
  CHECK(d.class_names == std::vector<std::string>{"yes", "no"});
  CHECK(d.features[1].kind == FeatureKind::discrete);
  CHECK(d.features[1].codes() == std::vector<int>{0, 1, 0, 2});
  CHECK(d.features[1].categories == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("load: question mark and empty cells are missing") {
  const auto d = parse("a,b,class\n1,?,0\n2,3,1\n,4,0\n5,6,1\n");
  CHECK(d.features[1].missing == std::vector<bool>{true, false, false, false});
  CHECK(d.features[0].missing == std::vector<bool>{false, false, true, false});
  CHECK(std::isnan(d.features[1].values[0]));
  CHECK(d.features[1].has_missing());
}

TEST_CASE("load: error cases") {
  CHECK_THROWS_WITH_AS(parse("a,class\n1,x\n2,x\n3,x\n"), doctest::Contains("degenerate labels"), DatasetError);
  CHECK_THROWS_WITH_AS(parse("a,b,class\n1,2,0\n3,1\n"), doctest::Contains("ragged"), DatasetError);
  CHECK_THROWS_AS(parse("a,b,class\n1,2,0\n3,4,1\n", {.label_column = "target"}), DatasetError);
  CHECK_THROWS_AS(parse("a,class\n1,?\n2,1\n"), DatasetError);
  CHECK_THROWS_AS(load_csv("/nonexistent/none.csv"), DatasetError);
}

TEST_CASE("load: label selection by name, index and schema") {
  const std::string text = "y,a,b\n0,1,2\n1,3,4\n0,5,6\n";
  const auto by_name = parse(text, {.label_column = "y"});
  CHECK(by_name.feature_names() == std::vector<std::string>{"a", "b"});
  const auto by_index = parse(text, {.label_column = "0"});
  CHECK(by_index.labels == by_name.labels);
  std::istringstream schema_text("# roles\ny=label\n\na=discrete\n");
  const auto schema = parse_schema(schema_text);
  const auto via_schema = parse(text, {.schema = schema});
  CHECK(via_schema.labels == std::vector<int>{0, 1, 0});
  CHECK(via_schema.features[0].declared == FeatureKind::discrete);
  CHECK(via_schema.features[0].kind == FeatureKind::discrete);
}

TEST_CASE("load: numeric labels are ordered by value") {
  const auto d = parse("a,class\n1,2\n2,1\n3,2\n");
  CHECK(d.class_names == std::vector<std::string>{"1", "2"});
  CHECK(d.labels == std::vector<int>{1, 0, 1});
}

TEST_CASE("load: quoted cells") {
  std::istringstream in("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n\n  3 , 4 \n");
  const auto rows = read_csv_rows(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "x, y");
  CHECK(rows[1][1] == "say \"hi\"");
  CHECK(rows[2][0] == "3");
}

TEST_CASE("load: bundled heart table has the published shape") {
  const std::filesystem::path dir = SFSDFC_DATA_DIR;
  const auto d = load_csv(dir / "heart_stat.csv", {.schema = read_schema(dir / "heart_stat.schema")});
  CHECK(d.n_samples() == 270);
  CHECK(d.n_features() == 13);
  const auto views = split_by_kind(d);
  CHECK(views.continuous.size() == 7);
  CHECK(views.discrete.size() == 6);
}

TEST_CASE("impute: median for continuous, mode for discrete") {
  Dataset d;
  d.features.push_back(synthetic::continuous_column("c", {1.0, 0.0, 3.0, 2.0}));
  d.features[0].values[1] = std::nan("");
  d.features[0].missing[1] = true;
  d.features.push_back(synthetic::discrete_column("d", {0, 0, 1, 0}));
  d.features[1].values[3] = std::nan("");
  d.features[1].missing[3] = true;
  synthetic::set_labels(d, {0, 1, 0, 1});

  const auto out = impute_missing(d, ImputePolicy::mode_or_median);
  CHECK(out.features[0].values == std::vector<double>{1.0, 2.0, 3.0, 2.0});
  CHECK(out.features[1].codes() == std::vector<int>{0, 0, 1, 0});
  CHECK_FALSE(out.features[0].has_missing());
  CHECK_FALSE(out.features[1].has_missing());
}

TEST_CASE("impute: median of three values") {
  Dataset d;
  d.features.push_back(synthetic::continuous_column("c", {1.0, 0.0, 3.0}));
  d.features[0].values[1] = std::nan("");
  d.features[0].missing[1] = true;
  synthetic::set_labels(d, {0, 1, 0});
  CHECK(impute_missing(d, ImputePolicy::mode_or_median).features[0].values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("impute: fully observed data is unchanged under both policies") {
  const auto d = parse("a,b,class\n1,x,0\n2,y,1\n3,x,0\n4,y,1\n5,x,0\n6,y,1\n7,x,0\n8,y,1\n9,x,0\n10,y,1\n");
  for (auto policy : {ImputePolicy::mode_or_median, ImputePolicy::drop_rows}) {
    const auto out = impute_missing(d, policy);
    CHECK(out.labels == d.labels);
    CHECK(out.features[0].values == d.features[0].values);
    CHECK(out.features[1].values == d.features[1].values);
  }
}

TEST_CASE("impute: drop rows") {
  std::ostringstream text;
  text << "a,class\n?,0\n";
  for (int i = 0; i < 10; ++i) text << i << ',' << i % 2 << '\n';
  const auto d = parse(text.str());
  const auto out = impute_missing(d, ImputePolicy::drop_rows);
  CHECK(out.n_samples() == 10);
  CHECK_FALSE(out.features[0].has_missing());

  const auto small = parse("a,class\n?,0\n1,1\n2,0\n3,1\n");
  CHECK_THROWS_AS(impute_missing(small, ImputePolicy::drop_rows), DatasetError);
}

TEST_CASE("impute: policy names") {
  CHECK(parse_impute_policy("median-mode") == ImputePolicy::mode_or_median);
  CHECK(parse_impute_policy("drop") == ImputePolicy::drop_rows);
  CHECK(to_string(ImputePolicy::drop_rows) == "drop");
  CHECK_THROWS_AS(parse_impute_policy("zero"), std::invalid_argument);
}

TEST_CASE("typing: strict threshold at epsilon = sqrt(n)") {
  CHECK(default_epsilon(100) == doctest::Approx(10.0));
  CHECK(parse(numeric_table(100, 3)).features[0].kind == FeatureKind::discrete);
  CHECK(parse(numeric_table(100, 50)).features[0].kind == FeatureKind::continuous);
  CHECK(parse(numeric_table(100, 10)).features[0].kind == FeatureKind::continuous);
  CHECK(parse(numeric_table(100, 9)).features[0].kind == FeatureKind::discrete);
}

TEST_CASE("typing: declared kinds are never overridden") {
  std::istringstream schema_text("f=continuous\n");
  const auto d = parse(numeric_table(100, 3), {.schema = parse_schema(schema_text)});
  CHECK(d.features[0].kind == FeatureKind::continuous);
  CHECK(infer_feature_kinds(d, 1000.0)[0] == FeatureKind::continuous);
}

TEST_CASE("typing: retyping round-trips numeric values") {
  const auto d = parse(numeric_table(100, 3));
  REQUIRE(d.features[0].kind == FeatureKind::discrete);
  const std::vector<FeatureKind> as_cont{FeatureKind::continuous};
  const auto c = with_kinds(d, as_cont);
  CHECK(c.features[0].values[0] == 0.0);
  CHECK(c.features[0].values[2] == 2.0);
  const std::vector<FeatureKind> as_disc{FeatureKind::discrete};
  CHECK(with_kinds(c, as_disc).features[0].values == d.features[0].values);
}

TEST_CASE("split: views partition the features") {
  Dataset d;
  d.features.push_back(synthetic::continuous_column("a", {1, 2}));
  synthetic::set_labels(d, {0, 1});
  auto views = split_by_kind(d);
  CHECK(views.continuous.size() == 1);
  CHECK(views.discrete.empty());

  d.features.push_back(synthetic::discrete_column("b", {0, 1}));
  d.features.push_back(synthetic::continuous_column("c", {3, 2}));
  views = split_by_kind(d);
  CHECK(views.continuous == std::vector<std::size_t>{0, 2});
  CHECK(views.discrete == std::vector<std::size_t>{1});

  Dataset all_disc;
  all_disc.features.push_back(synthetic::discrete_column("b", {0, 1}));
  synthetic::set_labels(all_disc, {0, 1});
  CHECK(split_by_kind(all_disc).continuous.empty());
}

TEST_CASE("standardize: z-scores and constant columns") {
  std::vector<double> column{1, 2, 3};
  CHECK(standardize_column(column));
  const double mean = std::accumulate(column.begin(), column.end(), 0.0) / 3.0;
  double var = 0;
  for (double v : column) var += (v - mean) * (v - mean);
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(var / 3.0 == doctest::Approx(1.0).epsilon(1e-12));

  const auto again = column;
  CHECK(standardize_column(column));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(column[i] - again[i]) < 1e-12);

  std::vector<double> constant{5, 5, 5};
  CHECK_FALSE(standardize_column(constant));
  CHECK(constant == std::vector<double>{0, 0, 0});
}

TEST_CASE("standardize: view flags constant columns") {
  Dataset d;
  d.features.push_back(synthetic::continuous_column("a", {1, 2, 3}));
  d.features.push_back(synthetic::continuous_column("b", {5, 5, 5}));
  synthetic::set_labels(d, {0, 1, 0});
  const std::vector<std::size_t> view{0, 1};
  const auto s = standardize(d, view);
  CHECK(s.constant == std::vector<bool>{false, true});
  CHECK(constant_features(d) == std::vector<std::size_t>{1});
}

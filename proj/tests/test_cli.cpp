#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sfsdfc/cli.hpp"
#include "sfsdfc/report.hpp"

using namespace sfsdfc;
using namespace sfsdfc::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("sfsdfc-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const fs::path kData = SFSDFC_DATA_DIR;

RunConfig quick(Command command, fs::path input) {
  RunConfig c;
  c.command = command;
  c.input = std::move(input);
  c.repeats = 2;
  c.threads = 2;
  return c;
}

/// Two informative integer columns with 5 levels, three noise columns, n rows.
void write_integer_table(const fs::path& path, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, 4);
  std::bernoulli_distribution flip(0.1);
  std::ofstream out(path);
  out << "a,b,n1,n2,n3,class\n";
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(i % 2);
    const int a = y * 3 + (flip(rng) ? 1 : 0);
    const int b = a + (flip(rng) ? 1 : 0);
    out << a << ',' << b << ',' << level(rng) << ',' << level(rng) << ',' << level(rng) << ',' << y << '\n';
  }
}

/// Noisy copies of informative and noise seeds, as continuous columns.
void write_copies_table(const fs::path& path, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::ofstream out(path);
  out << "s0a,s0b,s0c,s1a,s1b,s2a,s2b,class\n";
  out.precision(10);
  for (std::size_t i = 0; i < n; ++i) {
    const double s0 = normal(rng);
    const double s1 = normal(rng);
    const double s2 = normal(rng);
    const int y = s0 + 0.3 * s1 + 0.3 * normal(rng) > 0 ? 1 : 0;
    out << s0 + 0.1 * normal(rng) << ',' << 2 * s0 + 0.1 * normal(rng) << ',' << -s0 + 0.1 * normal(rng) << ','
        << s1 + 0.1 * normal(rng) << ',' << 3 - s1 + 0.1 * normal(rng) << ',' << s2 + 0.1 * normal(rng) << ','
        << s2 + 0.1 * normal(rng) << ',' << y << '\n';
  }
}

}  // namespace

TEST_CASE("select: missing input names the path") {
  std::ostringstream out, err;
  const auto c = quick(Command::select, "/no/such/table.csv");
  CHECK(cmd_select(c, out, err) != 0);
  CHECK(err.str().find("/no/such/table.csv") != std::string::npos);
  CHECK(out.str().empty());
}

TEST_CASE("select: heart table json carries the shape and fingerprint") {
  std::ostringstream out, err;
  const auto c = quick(Command::select, kData / "heart_stat.csv");
  REQUIRE(cmd_select(c, out, err) == 0);
  const auto j = json::parse(out.str());
  CHECK(j.at("counts").at("continuous") == 7);
  CHECK(j.at("counts").at("discrete") == 6);
  CHECK(j.at("tool") == kToolVersion);
  CHECK(j.at("config") == to_json(c));
  CHECK(err.str().find("selected=") != std::string::npos);
}

TEST_CASE("select: lower epsilon types more features continuous") {
  TempDir dir;
  write_integer_table(dir.path / "ints.csv", 200, 1);
  std::ostringstream out1, out2, err;
  auto c = quick(Command::select, dir.path / "ints.csv");
  REQUIRE(cmd_select(c, out1, err) == 0);
  c.epsilon = 2.0;
  REQUIRE(cmd_select(c, out2, err) == 0);
  const auto base = json::parse(out1.str()).at("counts");
  const auto low = json::parse(out2.str()).at("counts");
  CHECK(low.at("continuous").get<int>() > base.at("continuous").get<int>());
}

TEST_CASE("select: artifacts on disk") {
  TempDir dir;
  auto c = quick(Command::select, kData / "heart_stat.csv");
  c.output = dir.path / "sel.json";
  c.dump_dissim = dir.path / "dissim.csv";
  c.dump_clusters = dir.path / "clusters.json";
  std::ostringstream out, err;
  REQUIRE(cmd_select(c, out, err) == 0);
  CHECK(out.str().find("selected=") != std::string::npos);
  CHECK(fs::exists(*c.output));
  CHECK_FALSE(fs::exists(dir.path / "sel.json.tmp"));

  std::ifstream cont_in(dir.path / "dissim.continuous.csv");
  const auto rows = read_csv_rows(cont_in);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].size() == 8);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t j = 1; j < rows.size(); ++j) CHECK(rows[i][j] == rows[j][i]);
    CHECK(std::stod(rows[i][i]) == 0.0);
  }
  CHECK(fs::exists(dir.path / "dissim.discrete.csv"));

  const auto clusters = json::parse(slurp(*c.dump_clusters));
  std::size_t members = 0;
  for (const auto& cl : clusters) members += cl.at("members").size();
  CHECK(members == 13);
}

TEST_CASE("eval: subset plumbing and determinism") {
  TempDir dir;
  auto sel = quick(Command::select, kData / "heart_stat.csv");
  sel.output = dir.path / "sel.json";
  std::ostringstream sink, err;
  REQUIRE(cmd_select(sel, sink, err) == 0);
  const auto chosen = json::parse(slurp(*sel.output)).at("selected").size();

  auto ev = quick(Command::eval, kData / "heart_stat.csv");
  ev.subset = sel.output;
  ev.seed = 7;
  std::ostringstream a, b;
  REQUIRE(cmd_eval(ev, a, err) == 0);
  REQUIRE(cmd_eval(ev, b, err) == 0);
  const auto ja = json::parse(a.str());
  CHECK(ja.at("subset_size") == chosen);
  CHECK(ja.at("per_repeat_fold_accuracy").dump() == json::parse(b.str()).at("per_repeat_fold_accuracy").dump());

  ev.subset.reset();
  std::ostringstream full;
  REQUIRE(cmd_eval(ev, full, err) == 0);
  CHECK(json::parse(full.str()).at("subset_size") == 13);
}

TEST_CASE("eval: invalid subsets fail") {
  TempDir dir;
  std::ofstream(dir.path / "bad.json") << R"({"selected":[{"index":40}]})";
  std::ofstream(dir.path / "renamed.json") << R"({"selected":[{"index":0,"name":"nope"}]})";
  auto ev = quick(Command::eval, kData / "heart_stat.csv");
  std::ostringstream out, err;
  ev.subset = dir.path / "bad.json";
  CHECK(cmd_eval(ev, out, err) != 0);
  ev.subset = dir.path / "renamed.json";
  CHECK(cmd_eval(ev, out, err) != 0);
  ev.subset = dir.path / "absent.json";
  CHECK(cmd_eval(ev, out, err) != 0);
}

TEST_CASE("validate rejects out-of-range options") {
  auto c = quick(Command::eval, kData / "heart_stat.csv");
  c.folds = 1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = quick(Command::eval, kData / "heart_stat.csv");
  c.beta = 0.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = quick(Command::eval, kData / "heart_stat.csv");
  c.k = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.input.clear();
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("top_k_by_relevance") {
  const std::vector<double> r{0.1, 0.5, 0.5, 0.9, 0.0};
  CHECK(top_k_by_relevance(r, 2) == std::vector<std::size_t>{1, 3});
  CHECK(top_k_by_relevance(r, 10).size() == 5);
}

TEST_CASE("bench: two toy datasets") {
  TempDir dir;
  write_integer_table(dir.path / "a.csv", 120, 2);
  write_copies_table(dir.path / "b.csv", 150, 3);
  auto c = quick(Command::bench, dir.path);
  c.output = dir.path / "bench.out";
  std::ostringstream out, err;
  REQUIRE(cmd_bench(c, out, err) == 0);

  std::ifstream in(*c.output);
  const auto rows = read_csv_rows(in, '#');
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "dataset");
  CHECK(rows[1][0] == "a");
  CHECK(rows[2][0] == "b");
  CHECK(rows[3][0] == "mean_ranks");
  const auto text = slurp(*c.output);
  CHECK(text.rfind("# sfsdfc 0.1.0\n# config: ", 0) == 0);
}

TEST_CASE("bench: empty or missing directory fails") {
  TempDir dir;
  std::ostringstream out, err;
  CHECK(cmd_bench(quick(Command::bench, dir.path), out, err) != 0);
  CHECK(cmd_bench(quick(Command::bench, dir.path / "nope"), out, err) != 0);
}

TEST_CASE("bench: selected subsets track full accuracy on a synthetic suite") {
  TempDir dir;
  for (int i = 0; i < 4; ++i) write_copies_table(dir.path / ("syn" + std::to_string(i) + ".csv"), 200, 10 + i);
  auto c = quick(Command::bench, dir.path);
  c.repeats = 3;
  std::ostringstream out, err;
  REQUIRE(cmd_bench(c, out, err) == 0);
  std::istringstream in(out.str());
  const auto rows = read_csv_rows(in, '#');
  REQUIRE(rows.size() == 6);
  int close = 0;
  for (std::size_t i = 1; i <= 4; ++i) {
    if (std::stod(rows[i][1]) >= std::stod(rows[i][2]) - 0.03) ++close;
  }
  CHECK(close >= 2);
}

TEST_CASE("run: argv dispatch") {
  TempDir dir;
  const auto input = (kData / "contraceptive.csv").string();
  const auto output = (dir.path / "sel.json").string();
  std::vector<std::string> args{"sfsdfc", "select", "--input", input, "--output", output, "--threads", "1"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream captured;
  auto* old = std::cout.rdbuf(captured.rdbuf());
  const int status = run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old);
  CHECK(status == 0);
  const auto j = json::parse(slurp(output));
  CHECK(j.at("config").at("threads") == 1);
  CHECK(j.at("n_features") == 9);
}

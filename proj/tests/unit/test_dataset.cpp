#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"

#include "confperf/dataset.hpp"
#include "confperf/error.hpp"
#include "generators.hpp"

using namespace confperf;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("confperf_" + name);
  std::ofstream(path) << text;
  return path;
}

ConfigDataset ten_rows() {
  std::string csv = "a,b,c,d,performance\n";
  for (int i = 0; i < 10; ++i) {
    for (int f = 3; f >= 0; --f) csv += std::to_string((i >> f) & 1) + ",";
    csv += std::to_string(10 + i) + "\n";
  }
  return parse_csv(csv, "ten");
}

}  // namespace

TEST_CASE("load_csv parses a small table") {
  const auto path = write_temp("small.csv", "a,b,perf\n0,0,10\n1,0,12\n");
  const auto ds = load_csv(path);
  CHECK(ds.arity() == 2);
  CHECK(ds.size() == 2);
  CHECK(ds.name() == "confperf_small");
  CHECK(ds.feature_names() == std::vector<std::string>{"a", "b"});
  CHECK(ds.rows()[1].config == Configuration{1, 0});
  CHECK(ds.rows()[1].performance == 12.0);
  CHECK(ds.rows()[1].id == 1);
}

TEST_CASE("load_csv rejects bad tables") {
  CHECK_THROWS_AS(load_csv("/nonexistent/table.csv"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,b,perf\n0,0,0\n", "x"), doctest::Contains("non-positive performance"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,b,perf\n0,0,-3\n", "x"), doctest::Contains("non-positive"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,b,perf\n0,0,inf\n", "x"), doctest::Contains("non-finite"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,b,perf\n0,0\n", "x"), doctest::Contains("ragged"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,b,perf\n0,2,5\n", "x"), doctest::Contains("non-binary"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,b,perf\n0,1,abc\n", "x"), doctest::Contains("malformed"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,b,perf\n", "x"), doctest::Contains("empty dataset"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("", "x"), doctest::Contains("empty dataset"), DataError);
  CHECK_THROWS_WITH_AS(parse_csv("a,a,perf\n0,1,3\n", "x"), doctest::Contains("duplicate feature"), DataError);
}

TEST_CASE("performance column name is checked only when requested") {
  CHECK_NOTHROW(parse_csv("a,PERF\n1,3\n", "x"));
  CHECK_THROWS_AS(parse_csv("a,PERF\n1,3\n", "x", CsvOptions{"performance"}), DataError);
  CHECK_NOTHROW(parse_csv("a,performance\n1,3\n", "x", CsvOptions{"performance"}));
}

TEST_CASE("duplicate configurations collapse to the first occurrence") {
  const auto ds = parse_csv("a,b,perf\n0,1,5\n1,1,6\n0,1,7\n0,1,8\n", "dups");
  CHECK(ds.size() == 2);
  CHECK(ds.collapsed_duplicates() == 2);
  CHECK(ds.rows()[0].performance == 5.0);
  CHECK(ds.rows()[1].id == 1);
}

TEST_CASE("CRLF line endings and blank lines are tolerated") {
  const auto ds = parse_csv("a,b,perf\r\n0,1,5\r\n\r\n1,1,6\r\n", "crlf");
  CHECK(ds.size() == 2);
}

TEST_CASE("CSV round trip reproduces the dataset") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto arity = 1 + rng.uniform_index(12);
    const auto n = 1 + rng.uniform_index(std::min<std::size_t>(40, std::size_t{1} << arity));
    auto rows = testing::random_rows(rng, n, arity);
    for (auto& r : rows) r.performance = std::exp(10.0 * rng.uniform01() - 3.0);
    std::vector<std::string> names;
    for (std::size_t f = 0; f < arity; ++f) names.push_back("opt" + std::to_string(f));
    const ConfigDataset ds("rt", names, rows);
    CHECK(parse_csv(to_csv(ds), "rt") == ds);
  }
}

TEST_CASE("shuffle_split sizes follow floor arithmetic") {
  const auto ds = ten_rows();
  const auto split = shuffle_split(ds, 0.4, 7);
  CHECK(split.train.size() == 4);
  CHECK(split.test.size() == 6);
  CHECK(split.fraction == 0.4);
  CHECK(split.seed == 7);
  CHECK(train_size(0.4, 2560) == 1024);
  CHECK(train_size(0.29, 100) == 29);
  CHECK(train_size(0.4, 192) == 76);
}

TEST_CASE("shuffle_split is deterministic and a partition") {
  const auto ds = ten_rows();
  const auto a = shuffle_split(ds, 0.4, 7);
  const auto b = shuffle_split(ds, 0.4, 7);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);

  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 2 + rng.uniform_index(60);
    const auto rows = testing::random_rows(rng, n, 8);
    const ConfigDataset parent("p", {"a", "b", "c", "d", "e", "f", "g", "h"}, rows);
    const double fraction = 0.05 + 0.9 * rng.uniform01();
    const auto split = shuffle_split(parent, fraction, rng.next_u64());
    REQUIRE(split.train.size() + split.test.size() == n);
    CHECK(split.train.size() == train_size(fraction, n));
    std::multiset<std::size_t> ids;
    for (const auto& r : split.train.rows()) ids.insert(r.id);
    for (const auto& r : split.test.rows()) ids.insert(r.id);
    std::multiset<std::size_t> expected;
    for (const auto& r : rows) expected.insert(r.id);
    CHECK(ids == expected);
  }
}

TEST_CASE("different seeds give different partitions") {
  const auto ds = ten_rows();
  const auto base = shuffle_split(ds, 0.5, 0);
  int differing = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) differing += !(shuffle_split(ds, 0.5, seed).train == base.train);
  CHECK(differing > 40);
}

TEST_CASE("shuffle_split rejects fractions outside (0, 1)") {
  const auto ds = ten_rows();
  CHECK_THROWS_AS(shuffle_split(ds, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(shuffle_split(ds, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(shuffle_split(ds, -0.2, 1), ParameterError);
  CHECK_THROWS_AS(shuffle_split(ConfigDataset{}, 0.5, 1), ParameterError);
}

TEST_CASE("JSON export lists features and rows") {
  const auto json = to_json(parse_csv("a,b,perf\n0,1,5\n", "j"));
  CHECK(json.find("\"feature_names\"") != std::string::npos);
  CHECK(json.find("\"01\"") != std::string::npos);
}

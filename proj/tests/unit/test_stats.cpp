#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "confperf/error.hpp"
#include "confperf/rng.hpp"
#include "confperf/stats.hpp"

using namespace confperf;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n, double centre, double spread) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(centre + spread * rng.normal());
  return out;
}

}  // namespace

TEST_CASE("a12 examples") {
  CHECK(a12(std::vector<double>{5, 5}, std::vector<double>{5, 5}) == 0.5);
  CHECK(a12(std::vector<double>{2, 2}, std::vector<double>{1, 1}) == 1.0);
  CHECK(a12(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.5);
  CHECK(a12(std::vector<double>{1}, std::vector<double>{3, 0}) == 0.5);
  CHECK_THROWS_AS(a12(std::vector<double>{}, std::vector<double>{1}), ParameterError);
}

TEST_CASE("a12 complements and is rank based") {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> xs, ys;
    const auto nx = 1 + rng.uniform_index(15), ny = 1 + rng.uniform_index(15);
    for (std::size_t i = 0; i < nx; ++i) xs.push_back(static_cast<double>(rng.uniform_index(6)));
    for (std::size_t i = 0; i < ny; ++i) ys.push_back(static_cast<double>(rng.uniform_index(6)));
    CHECK(a12(xs, ys) + a12(ys, xs) == doctest::Approx(1.0));
    CHECK(a12(xs, xs) == doctest::Approx(0.5));
    auto transform = [](std::vector<double> v) {
      for (auto& x : v) x = std::exp(0.7 * x) - 3.0;
      return v;
    };
    CHECK(a12(transform(xs), transform(ys)) == doctest::Approx(a12(xs, ys)));
  }
}

TEST_CASE("bootstrap on identical and separated samples") {
  Rng rng(2);
  const auto xs = draw(rng, 20, 100, 1);
  CHECK_FALSE(bootstrap_significant(xs, xs));
  const auto ys = draw(rng, 20, 200, 1);
  CHECK(bootstrap_significant(xs, ys, {1000, 0.95, 3}));
  CHECK(bootstrap_significant(ys, xs, {1000, 0.95, 3}));
  CHECK(bootstrap_significant(xs, ys, {1000, 0.95, 3}) == bootstrap_significant(xs, ys, {1000, 0.95, 3}));
  CHECK_THROWS_AS(bootstrap_significant(xs, std::vector<double>{}), ParameterError);
  CHECK_THROWS_AS(bootstrap_significant(xs, ys, {50, 0.95, 0}), ParameterError);
  CHECK_THROWS_AS(bootstrap_significant(xs, ys, {1000, 1.0, 0}), ParameterError);
}

TEST_CASE("bootstrap false-positive rate is near 1 - confidence") {
  Rng rng(3);
  int positives = 0;
  const int trials = 300;
  for (int t = 0; t < trials; ++t) {
    const auto xs = draw(rng, 20, 10, 2);
    const auto ys = draw(rng, 20, 10, 2);
    positives += bootstrap_significant(xs, ys, {500, 0.95, rng.next_u64()});
  }
  const double rate = static_cast<double>(positives) / trials;
  CHECK(rate > 0.01);
  CHECK(rate < 0.10);
}

TEST_CASE("Scott-Knott examples") {
  const auto table = scott_knott({{"A", {1, 1, 1}}, {"B", {1, 1, 1}}, {"C", {5, 5, 5}}});
  REQUIRE(table.entries.size() == 3);
  CHECK(table.entries[0].name == "A");
  CHECK(table.entries[0].rank == 1);
  CHECK(table.entries[1].name == "B");
  CHECK(table.entries[1].rank == 1);
  CHECK(table.entries[2].name == "C");
  CHECK(table.entries[2].rank == 2);

  const auto single = scott_knott({{"only", {3, 4}}});
  CHECK(single.entries[0].rank == 1);

  std::vector<double> seq;
  for (int i = 1; i <= 20; ++i) seq.push_back(i);
  const auto same = scott_knott({{"A", seq}, {"B", seq}});
  CHECK(same.entries[0].rank == 1);
  CHECK(same.entries[1].rank == 1);

  CHECK_THROWS_AS(scott_knott({}), ParameterError);
  CHECK_THROWS_AS(scott_knott({{"A", {}}}), ParameterError);
}

TEST_CASE("Scott-Knott separates clearly different groups and sorts by mean") {
  Rng rng(4);
  const auto table = scott_knott({{"slow", draw(rng, 20, 30, 1)},
                                  {"fast", draw(rng, 20, 5, 1)},
                                  {"mid", draw(rng, 20, 15, 1)},
                                  {"fast2", draw(rng, 20, 5, 1)}});
  REQUIRE(table.entries.size() == 4);
  CHECK(table.entries[3].name == "slow");
  CHECK(table.entries[3].rank == 3);
  CHECK(table.entries[2].name == "mid");
  CHECK(table.entries[2].rank == 2);
  CHECK(table.entries[0].rank == 1);
  CHECK(table.entries[1].rank == 1);
  CHECK(to_text(table).find("slow") != std::string::npos);
  CHECK(to_json(table).find("\"rank\": 3") != std::string::npos);
}

TEST_CASE("Scott-Knott ranks never decrease with the mean") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<std::string, std::vector<double>>> groups;
    const auto k = 1 + rng.uniform_index(6);
    for (std::size_t g = 0; g < k; ++g) {
      groups.emplace_back("g" + std::to_string(g), draw(rng, 5 + rng.uniform_index(10),
                                                        static_cast<double>(rng.uniform_index(4)) * 3.0, 1.0));
    }
    const auto table = scott_knott(groups, {{200, 0.95, rng.next_u64()}, kSmallEffect});
    CHECK(table.entries.front().rank == 1);
    for (std::size_t i = 1; i < table.entries.size(); ++i) {
      CHECK(table.entries[i - 1].mean <= table.entries[i].mean);
      CHECK(table.entries[i - 1].rank <= table.entries[i].rank);
      CHECK(table.entries[i].rank - table.entries[i - 1].rank <= 1);
    }
  }
}

TEST_CASE("mean and sample standard deviation") {
  CHECK(mean(std::vector<double>{1, 2, 3}) == 2.0);
  CHECK(sample_stddev(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}) == doctest::Approx(2.138089935));
  CHECK(sample_stddev(std::vector<double>{3}) == 0.0);
}

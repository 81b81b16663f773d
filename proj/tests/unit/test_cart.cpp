#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"

#include "confperf/cart.hpp"
#include "confperf/error.hpp"
#include "generators.hpp"

using namespace confperf;

namespace {

std::vector<MeasuredConfig> table(const std::vector<std::pair<std::string, double>>& entries) {
  std::vector<MeasuredConfig> rows;
  for (const auto& [bits, perf] : entries) rows.push_back({Configuration::from_string(bits), perf, rows.size()});
  return rows;
}

// Weighted-sigma score of splitting `rows` on feature f; infinity when a
// side would be smaller than min_leaf.
double split_score(const std::vector<MeasuredConfig>& rows, std::size_t f, std::size_t min_leaf) {
  std::vector<double> lo, hi;
  for (const auto& r : rows) (r.config[f] ? hi : lo).push_back(r.performance);
  if (lo.size() < min_leaf || hi.size() < min_leaf) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(rows.size());
  return static_cast<double>(lo.size()) / n * testing::pop_sigma(lo) + static_cast<double>(hi.size()) / n * testing::pop_sigma(hi);
}

// Walks the fitted tree alongside the training rows and checks every node
// against the exhaustive oracle.
void check_node(const RegressionTree& tree, std::size_t index, const std::vector<MeasuredConfig>& rows,
                const CartParams& params, std::size_t depth) {
  const auto& node = tree.nodes()[index];
  REQUIRE(node.count == rows.size());
  std::vector<double> perf;
  for (const auto& r : rows) perf.push_back(r.performance);
  const double sigma = testing::pop_sigma(perf);
  double mean = 0.0;
  for (double p : perf) mean += p;
  mean /= static_cast<double>(perf.size());
  CHECK(node.prediction == doctest::Approx(mean));

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < tree.arity(); ++f) best = std::min(best, split_score(rows, f, params.min_samples_leaf));

  const double tol = 1e-9 * std::max(1.0, std::abs(mean));
  if (node.is_leaf()) {
    const bool may_split = rows.size() >= params.min_samples_split && (!params.max_depth || depth < *params.max_depth);
    if (may_split) CHECK(best >= sigma - tol);
    return;
  }
  const auto f = static_cast<std::size_t>(node.feature);
  CHECK(split_score(rows, f, params.min_samples_leaf) <= best + tol);
  CHECK(split_score(rows, f, params.min_samples_leaf) < sigma);
  std::vector<MeasuredConfig> left, right;
  for (const auto& r : rows) (r.config[f] ? right : left).push_back(r);
  check_node(tree, node.left, left, params, depth + 1);
  check_node(tree, node.right, right, params, depth + 1);
}

}  // namespace

TEST_CASE("constant performance gives a single leaf") {
  const auto rows = table({{"00", 10}, {"01", 10}, {"10", 10}, {"11", 10}});
  const auto tree = fit(rows, {2, 1, {}});
  CHECK(tree.nodes().size() == 1);
  CHECK(tree.predict(Configuration{1, 0}) == 10.0);
}

TEST_CASE("two samples split on their only feature") {
  const auto rows = table({{"0", 10}, {"1", 20}});
  const auto tree = fit(rows, {2, 1, {}});
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.predict(Configuration{0}) == 10.0);
  CHECK(tree.predict(Configuration{1}) == 20.0);
  // Default min_samples_split = 4 keeps two rows together.
  CHECK(fit(rows).nodes().size() == 1);
}

TEST_CASE("additive two-feature table grows a depth-2 tree, feature 0 first") {
  const auto rows = table({{"00", 0}, {"01", 1}, {"10", 2}, {"11", 3}});
  // Oracle: weighted sigma 0.5 for feature 0, 1.0 for feature 1.
  CHECK(split_score(rows, 0, 1) == doctest::Approx(0.5));
  CHECK(split_score(rows, 1, 1) == doctest::Approx(1.0));
  const auto tree = fit(rows, {2, 1, {}});
  CHECK(tree.depth() == 2);
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.leaf_count() == 4);
  for (const auto& r : rows) CHECK(tree.predict(r.config) == r.performance);
  CHECK(tree.predict(Configuration{1, 1}) == 3.0);
}

TEST_CASE("predict and fit errors") {
  const auto rows = table({{"01", 3}, {"10", 4}});
  const auto tree = fit(rows, {2, 1, {}});
  CHECK_THROWS_AS(tree.predict(Configuration{1, 0, 1}), DataError);
  CHECK_THROWS_AS(fit(std::vector<MeasuredConfig>{}), DataError);
  auto mixed = rows;
  mixed.push_back({Configuration{1}, 2.0, 2});
  CHECK_THROWS_AS(fit(mixed, {2, 1, {}}), DataError);
  CHECK_THROWS_AS(fit(rows, {1, 1, {}}), ParameterError);
  CHECK_THROWS_AS(fit(rows, {4, 3, {}}), ParameterError);
  CHECK_THROWS_AS(fit(rows, {4, 0, {}}), ParameterError);
}

TEST_CASE("max_depth caps growth") {
  const auto rows = table({{"00", 0.5}, {"01", 1.5}, {"10", 2.5}, {"11", 3.5}});
  const auto stump = fit(rows, {2, 1, 1});
  CHECK(stump.depth() == 1);
  CHECK(stump.predict(Configuration{0, 1}) == 1.0);
  CHECK(fit(rows, {2, 1, 0}).nodes().size() == 1);
}

TEST_CASE("split optimality against the exhaustive oracle") {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto arity = 1 + rng.uniform_index(8);
    const auto n = 1 + rng.uniform_index(std::min<std::size_t>(64, std::size_t{1} << arity));
    auto rows = testing::random_rows(rng, n, arity);
    // Quantize some performances so ties between features occur.
    if (trial % 2 == 0) {
      for (auto& r : rows) r.performance = 1.0 + static_cast<double>(rng.uniform_index(4));
    }
    const std::size_t min_leaf = 1 + rng.uniform_index(3);
    const CartParams params{2 * min_leaf + rng.uniform_index(3), min_leaf,
                            trial % 3 == 0 ? std::optional<std::size_t>(rng.uniform_index(5)) : std::nullopt};
    const auto tree = fit(rows, params);
    check_node(tree, 0, rows, params, 0);
  }
}

TEST_CASE("fully grown trees memorize distinct training rows") {
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto arity = 1 + rng.uniform_index(12);
    const auto n = 1 + rng.uniform_index(std::min<std::size_t>(64, std::size_t{1} << arity));
    const auto rows = testing::random_rows(rng, n, arity);
    const auto tree = fit(rows, {2, 1, {}});
    double lo = rows[0].performance, hi = rows[0].performance;
    for (const auto& r : rows) {
      CHECK(tree.predict(r.config) == doctest::Approx(r.performance));
      lo = std::min(lo, r.performance);
      hi = std::max(hi, r.performance);
    }
    for (const auto& node : tree.nodes()) {
      CHECK(node.prediction >= lo - 1e-9);
      CHECK(node.prediction <= hi + 1e-9);
    }
  }
}

TEST_CASE("duplicating the training set leaves predictions unchanged") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = testing::random_rows(rng, 2 + rng.uniform_index(40), 8);
    auto doubled = rows;
    doubled.insert(doubled.end(), rows.begin(), rows.end());
    const auto once = fit(rows, {2, 1, {}});
    const auto twice = fit(doubled, {2, 1, {}});
    for (const auto& c : testing::all_configs(8)) CHECK(once.predict(c) == doctest::Approx(twice.predict(c)));
  }
}

TEST_CASE("JSON round trip preserves the tree") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rows = testing::random_rows(rng, 40, 9);
    const auto tree = fit(rows);
    CHECK(tree_from_json(to_json(tree)) == tree);
  }
  CHECK_THROWS_AS(tree_from_json("{}"), DataError);
  CHECK_THROWS_AS(tree_from_json("not json"), DataError);
  CHECK_THROWS_AS(tree_from_json(R"({"arity": 2, "root": {"kind": "split", "feature": 5, "prediction": 1, "count": 2,
      "left": {"kind": "leaf", "prediction": 1, "count": 1}, "right": {"kind": "leaf", "prediction": 1, "count": 1}}})"),
                  DataError);
}

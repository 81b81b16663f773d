#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confperf/dataset.hpp"

namespace confperf {

struct CartParams {
  std::size_t min_samples_split = 4;
  std::size_t min_samples_leaf = 1;
  std::optional<std::size_t> max_depth;

  /// Throws ParameterError when the fields are inconsistent.
  void validate() const;
};

/// CART regression tree over Boolean features.
///
/// Nodes live in a flat array; node 0 is the root. Every node stores the
/// mean and count of the training rows that reached it, split nodes also
/// store the feature they test (false goes left).
class RegressionTree {
 public:
  static constexpr std::int32_t kLeaf = -1;

  struct Node {
    std::int32_t feature = kLeaf;
    double prediction = 0.0;
    std::size_t count = 0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;

    bool is_leaf() const noexcept { return feature == kLeaf; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  RegressionTree() = default;
  RegressionTree(std::size_t arity, std::vector<Node> nodes);

  std::size_t arity() const noexcept { return arity_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const;
  std::size_t depth() const;

  /// Throws DataError on arity mismatch.
  double predict(const Configuration& config) const;
  /// Index of the leaf `config` is routed to.
  std::size_t leaf_index(const Configuration& config) const;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::size_t arity_ = 0;
  std::vector<Node> nodes_;
};

/// Population standard deviation of the performances in `samples`.
double population_stddev(std::span<const MeasuredConfig> samples);

/// Grows a tree choosing at every node the feature whose split minimizes
/// |A|/N * sigma_A + |B|/N * sigma_B. A node becomes a leaf when it is
/// smaller than min_samples_split, at max_depth, or when no admissible
/// split strictly beats the node's own sigma. Ties go to the lowest feature.
/// Throws DataError for an empty sample set or mixed arities.
RegressionTree fit(std::span<const MeasuredConfig> samples, const CartParams& params = {});

/// Nested JSON: {"arity", "root": {"kind": "leaf"|"split", "feature", "prediction", "count",
/// "left", "right"}}.
std::string to_json(const RegressionTree& tree);
/// Inverse of to_json. Throws DataError on malformed input.
RegressionTree tree_from_json(std::string_view json);

}  // namespace confperf

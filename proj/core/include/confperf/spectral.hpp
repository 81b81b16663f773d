#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confperf/dataset.hpp"

namespace confperf {

/// Euclidean distance with Boolean options embedded as 0/1, i.e. the square
/// root of the Hamming distance. Throws DataError on arity mismatch.
double distance(const Configuration& a, const Configuration& b);

/// Plain Euclidean distance between real vectors of equal length.
double distance(std::span<const double> a, std::span<const double> b);

/// Two distant rows approximating the first principal component.
struct PoleLine {
  MeasuredConfig west;
  MeasuredConfig east;
  double c = 0.0;  ///< distance(west, east)
  std::size_t west_pos = 0;  ///< position of west in the row list it came from
  std::size_t east_pos = 0;
  std::size_t distance_evaluations = 0;

  bool degenerate() const noexcept { return c == 0.0; }
};

/// FASTMAP pole search: pick a random row, take the row furthest from it as
/// west, then the row (other than west) furthest from west as east. Ties go
/// to the lowest position. Exactly 2*|rows| distances are computed.
/// Throws ParameterError for fewer than two rows.
PoleLine find_poles(std::span<const MeasuredConfig> rows, std::uint64_t seed);

/// Position of x along the west-east line by the cosine rule:
/// (a^2 + c^2 - b^2) / (2c) with a = |west - x|, b = |east - x|.
/// Throws NumericError when the line is degenerate.
double project(const Configuration& x, const PoleLine& line);

struct SpectralParams {
  double leaf_threshold_multiplier = 1.0;
  std::uint64_t seed = 0;
};

/// Node of the recursive bisection. Leaves hold the final clusters.
struct ClusterNode {
  std::vector<MeasuredConfig> rows;
  /// Position of each row in the list given to where_cluster.
  std::vector<std::size_t> positions;
  std::optional<PoleLine> line;
  std::unique_ptr<ClusterNode> left;
  std::unique_ptr<ClusterNode> right;
  std::uint64_t seed = 0;
  std::size_t depth = 0;

  bool is_leaf() const noexcept { return !left; }
};

/// Result of where_cluster: the root plus the stopping threshold used.
struct ClusterTree {
  ClusterNode root;
  double threshold = 0.0;

  /// Leaves in left-to-right order.
  std::vector<const ClusterNode*> leaves() const;
  std::size_t leaf_count() const;
  std::size_t depth() const;
};

/// Stopping threshold: multiplier * sqrt(n_root).
double leaf_threshold(std::size_t n_root, double multiplier);

/// Recursively splits `rows` at the median FASTMAP projection until a node
/// holds fewer than threshold rows or its poles coincide. Child seeds are
/// derived from the parent seed and the child index, so the tree depends
/// only on (rows, params). Throws ParameterError for an empty row list or a
/// non-positive multiplier.
ClusterTree where_cluster(std::span<const MeasuredConfig> rows, const SpectralParams& params);

/// Debug dump: node sizes, pole ids and c per node. Not a stable format.
std::string to_json(const ClusterTree& tree);

}  // namespace confperf

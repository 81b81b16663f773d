#include "confperf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "confperf/error.hpp"
#include "confperf/rng.hpp"

namespace confperf {

double distance(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) {
    throw DataError("distance: arity mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  const auto xa = a.bits();
  const auto xb = b.bits();
  std::size_t differing = 0;
  for (std::size_t i = 0; i < xa.size(); ++i) differing += xa[i] != xb[i];
  return std::sqrt(static_cast<double>(differing));
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("distance: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

PoleLine find_poles(std::span<const MeasuredConfig> rows, std::uint64_t seed) {
  if (rows.size() < 2) throw ParameterError("find_poles needs at least two rows");
  Rng rng(seed);
  const auto& anchor = rows[rng.uniform_index(rows.size())].config;

  std::size_t west = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = distance(anchor, rows[i].config);
    if (d > best) {
      best = d;
      west = i;
    }
  }

  // East must be a different row even when every distance is zero.
  std::size_t east = west == 0 ? 1 : 0;
  best = -1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = distance(rows[west].config, rows[i].config);
    if (i != west && d > best) {
      best = d;
      east = i;
    }
  }

  return PoleLine{rows[west], rows[east], best, west, east, 2 * rows.size()};
}

double project(const Configuration& x, const PoleLine& line) {
  if (line.degenerate()) throw NumericError("cannot project onto a degenerate pole line (c = 0)");
  const double a = distance(line.west.config, x);
  const double b = distance(line.east.config, x);
  const double c = line.c;
  return (a * a + c * c - b * b) / (2.0 * c);
}

double leaf_threshold(std::size_t n_root, double multiplier) {
  return multiplier * std::sqrt(static_cast<double>(n_root));
}

namespace {

void bisect(ClusterNode& node, double threshold) {
  const std::size_t n = node.rows.size();
  if (n < 2 || static_cast<double>(n) < threshold) return;

  auto line = find_poles(node.rows, node.seed);
  if (line.degenerate()) {
    node.line = std::move(line);
    return;
  }

  std::vector<double> proj(n);
  for (std::size_t i = 0; i < n; ++i) proj[i] = project(node.rows[i].config, line);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (proj[a] != proj[b]) return proj[a] < proj[b];
    return node.positions[a] < node.positions[b];
  });

  const std::size_t half = n / 2;
  auto make_child = [&](std::size_t begin, std::size_t end, std::uint64_t index) {
    auto child = std::make_unique<ClusterNode>();
    child->rows.reserve(end - begin);
    child->positions.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
      child->rows.push_back(node.rows[order[k]]);
      child->positions.push_back(node.positions[order[k]]);
    }
    child->seed = derive_seed(node.seed, index);
    child->depth = node.depth + 1;
    return child;
  };
  node.left = make_child(0, half, 0);
  node.right = make_child(half, n, 1);
  node.line = std::move(line);

  bisect(*node.left, threshold);
  bisect(*node.right, threshold);
}

void collect_leaves(const ClusterNode& node, std::vector<const ClusterNode*>& out) {
  if (node.is_leaf()) {
    out.push_back(&node);
    return;
  }
  collect_leaves(*node.left, out);
  collect_leaves(*node.right, out);
}

std::size_t node_depth(const ClusterNode& node) {
  if (node.is_leaf()) return 0;
  return 1 + std::max(node_depth(*node.left), node_depth(*node.right));
}

nlohmann::json node_json(const ClusterNode& node) {
  nlohmann::json j;
  j["size"] = node.rows.size();
  j["depth"] = node.depth;
  if (node.line) {
    j["west_id"] = node.line->west.id;
    j["east_id"] = node.line->east.id;
    j["c"] = node.line->c;
  }
  if (node.is_leaf()) {
    std::vector<std::size_t> ids;
    for (const auto& r : node.rows) ids.push_back(r.id);
    j["row_ids"] = ids;
  } else {
    j["left"] = node_json(*node.left);
    j["right"] = node_json(*node.right);
  }
  return j;
}

}  // namespace

ClusterTree where_cluster(std::span<const MeasuredConfig> rows, const SpectralParams& params) {
  if (rows.empty()) throw ParameterError("where_cluster needs at least one row");
  if (!(params.leaf_threshold_multiplier > 0.0)) {
    throw ParameterError("leaf threshold multiplier must be positive");
  }
  ClusterTree tree;
  tree.threshold = leaf_threshold(rows.size(), params.leaf_threshold_multiplier);
  tree.root.rows.assign(rows.begin(), rows.end());
  tree.root.positions.resize(rows.size());
  std::iota(tree.root.positions.begin(), tree.root.positions.end(), std::size_t{0});
  tree.root.seed = params.seed;
  bisect(tree.root, tree.threshold);
  return tree;
}

std::vector<const ClusterNode*> ClusterTree::leaves() const {
  std::vector<const ClusterNode*> out;
  collect_leaves(root, out);
  return out;
}

std::size_t ClusterTree::leaf_count() const { return leaves().size(); }

std::size_t ClusterTree::depth() const { return node_depth(root); }

std::string to_json(const ClusterTree& tree) {
  nlohmann::json j;
  j["threshold"] = tree.threshold;
  j["leaves"] = tree.leaf_count();
  j["root"] = node_json(tree.root);
  return j.dump(2);
}

}  // namespace confperf

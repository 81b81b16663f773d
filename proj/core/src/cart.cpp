#include "confperf/cart.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "json.hpp"

#include "confperf/error.hpp"

namespace confperf {

void CartParams::validate() const {
  if (min_samples_split < 2) throw ParameterError("min_samples_split must be at least 2");
  if (min_samples_leaf < 1) throw ParameterError("min_samples_leaf must be at least 1");
  if (2 * min_samples_leaf > min_samples_split) {
    throw ParameterError("2 * min_samples_leaf must not exceed min_samples_split");
  }
}

RegressionTree::RegressionTree(std::size_t arity, std::vector<Node> nodes)
    : arity_(arity), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw DataError("regression tree has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.is_leaf()) continue;
    if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= arity_) {
      throw DataError("split feature " + std::to_string(n.feature) + " out of range");
    }
    // Children always come after their parent, which rules out cycles.
    if (n.left <= i || n.right <= i || n.left >= nodes_.size() || n.right >= nodes_.size()) {
      throw DataError("malformed child index in regression tree");
    }
  }
}

std::size_t RegressionTree::leaf_count() const {
  std::size_t count = 0;
  for (const auto& n : nodes_) count += n.is_leaf();
  return count;
}

std::size_t RegressionTree::depth() const {
  std::function<std::size_t(std::size_t)> rec = [&](std::size_t i) -> std::size_t {
    const auto& n = nodes_[i];
    if (n.is_leaf()) return 0;
    return 1 + std::max(rec(n.left), rec(n.right));
  };
  return nodes_.empty() ? 0 : rec(0);
}

std::size_t RegressionTree::leaf_index(const Configuration& config) const {
  if (config.size() != arity_) {
    throw DataError("predict: configuration arity " + std::to_string(config.size()) +
                    " does not match tree arity " + std::to_string(arity_));
  }
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = config[static_cast<std::size_t>(n.feature)] ? n.right : n.left;
  }
  return i;
}

double RegressionTree::predict(const Configuration& config) const {
  return nodes_[leaf_index(config)].prediction;
}

double population_stddev(std::span<const MeasuredConfig> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) sum += s.performance;
  const double mu = sum / static_cast<double>(samples.size());
  double ss = 0.0;
  for (const auto& s : samples) ss += (s.performance - mu) * (s.performance - mu);
  return std::sqrt(ss / static_cast<double>(samples.size()));
}

namespace {

struct Moments {
  double mean = 0.0;
  double sigma = 0.0;
};

class Grower {
 public:
  Grower(std::span<const MeasuredConfig> samples, const CartParams& params)
      : samples_(samples), params_(params), arity_(samples.front().config.size()) {}

  std::vector<RegressionTree::Node> grow() {
    std::vector<std::size_t> all(samples_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    build(all, 0);
    return std::move(nodes_);
  }

 private:
  Moments moments(const std::vector<std::size_t>& idx) const {
    double sum = 0.0;
    for (auto i : idx) sum += samples_[i].performance;
    const double mu = sum / static_cast<double>(idx.size());
    double ss = 0.0;
    for (auto i : idx) {
      const double d = samples_[i].performance - mu;
      ss += d * d;
    }
    return {mu, std::sqrt(ss / static_cast<double>(idx.size()))};
  }

  std::uint32_t build(const std::vector<std::size_t>& idx, std::size_t depth) {
    const auto self = static_cast<std::uint32_t>(nodes_.size());
    const auto m = moments(idx);
    nodes_.push_back({RegressionTree::kLeaf, m.mean, idx.size(), 0, 0});

    const std::size_t n = idx.size();
    if (n < params_.min_samples_split) return self;
    if (params_.max_depth && depth >= *params_.max_depth) return self;
    if (m.sigma == 0.0) return self;

    // Scores within this relative band count as ties, so the lowest
    // feature wins regardless of summation-order noise.
    const double tol = 1e-12 * std::max(m.sigma, std::abs(m.mean));
    int best_feature = -1;
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> left, right;
    for (std::size_t f = 0; f < arity_; ++f) {
      left.clear();
      right.clear();
      for (auto i : idx) (samples_[i].config[f] ? right : left).push_back(i);
      if (left.size() < params_.min_samples_leaf || right.size() < params_.min_samples_leaf) continue;
      const double score = (static_cast<double>(left.size()) * moments(left).sigma +
                            static_cast<double>(right.size()) * moments(right).sigma) /
                           static_cast<double>(n);
      if (score < best_score - tol) {
        best_score = score;
        best_feature = static_cast<int>(f);
      }
    }
    if (best_feature < 0 || !(best_score < m.sigma - tol)) return self;

    left.clear();
    right.clear();
    for (auto i : idx) (samples_[i].config[static_cast<std::size_t>(best_feature)] ? right : left).push_back(i);
    const auto l = build(left, depth + 1);
    const auto r = build(right, depth + 1);
    auto& node = nodes_[self];
    node.feature = best_feature;
    node.left = l;
    node.right = r;
    return self;
  }

  std::span<const MeasuredConfig> samples_;
  const CartParams& params_;
  std::size_t arity_;
  std::vector<RegressionTree::Node> nodes_;
};

nlohmann::json node_json(const RegressionTree& tree, std::size_t i) {
  const auto& n = tree.nodes()[i];
  nlohmann::json j;
  j["kind"] = n.is_leaf() ? "leaf" : "split";
  j["prediction"] = n.prediction;
  j["count"] = n.count;
  if (!n.is_leaf()) {
    j["feature"] = n.feature;
    j["left"] = node_json(tree, n.left);
    j["right"] = node_json(tree, n.right);
  }
  return j;
}

std::uint32_t node_from_json(const nlohmann::json& j, std::vector<RegressionTree::Node>& nodes,
                             std::size_t depth) {
  if (depth > 10000) throw DataError("regression tree JSON nested too deeply");
  if (!j.is_object()) throw DataError("regression tree node must be an object");
  const auto self = static_cast<std::uint32_t>(nodes.size());
  RegressionTree::Node node;
  node.prediction = j.at("prediction").get<double>();
  node.count = j.at("count").get<std::size_t>();
  const auto kind = j.at("kind").get<std::string>();
  nodes.push_back(node);
  if (kind == "leaf") return self;
  if (kind != "split") throw DataError("unknown node kind '" + kind + "'");
  const int feature = j.at("feature").get<int>();
  const auto l = node_from_json(j.at("left"), nodes, depth + 1);
  const auto r = node_from_json(j.at("right"), nodes, depth + 1);
  nodes[self].feature = feature;
  nodes[self].left = l;
  nodes[self].right = r;
  return self;
}

}  // namespace

RegressionTree fit(std::span<const MeasuredConfig> samples, const CartParams& params) {
  params.validate();
  if (samples.empty()) throw DataError("cannot fit a regression tree on zero samples");
  const auto arity = samples.front().config.size();
  for (const auto& s : samples) {
    if (s.config.size() != arity) throw DataError("fit: samples have mixed arity");
  }
  return RegressionTree(arity, Grower(samples, params).grow());
}

std::string to_json(const RegressionTree& tree) {
  nlohmann::json j;
  j["arity"] = tree.arity();
  j["root"] = node_json(tree, 0);
  return j.dump(2);
}

RegressionTree tree_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    if (!j.at("arity").is_number_unsigned()) throw DataError("tree arity must be a non-negative integer");
    const auto arity = j.at("arity").get<std::size_t>();
    std::vector<RegressionTree::Node> nodes;
    node_from_json(j.at("root"), nodes, 0);
    return RegressionTree(arity, std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed regression tree JSON: ") + e.what());
  }
}

}  // namespace confperf

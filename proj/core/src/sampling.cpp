#include "confperf/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "json.hpp"

#include "confperf/error.hpp"
#include "confperf/rng.hpp"

namespace confperf {

std::string_view to_string(SamplingPolicy policy) {
  switch (policy) {
    case SamplingPolicy::S1: return "s1";
    case SamplingPolicy::S2: return "s2";
    case SamplingPolicy::S3: return "s3";
    case SamplingPolicy::RandomK: return "random";
    case SamplingPolicy::Progressive2N: return "progressive";
    case SamplingPolicy::Full: return "full";
  }
  return "unknown";
}

SamplingPolicy parse_policy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto p : {SamplingPolicy::S1, SamplingPolicy::S2, SamplingPolicy::S3, SamplingPolicy::RandomK,
                 SamplingPolicy::Progressive2N, SamplingPolicy::Full}) {
    if (lower == to_string(p)) return p;
  }
  throw ParameterError("unknown sampling policy '" + std::string(name) + "'");
}

SamplePlan sample_s1(const ClusterTree& tree, std::uint64_t seed) {
  SamplePlan plan{SamplingPolicy::S1, {}, 0};
  const auto leaves = tree.leaves();
  for (std::size_t j = 0; j < leaves.size(); ++j) {
    Rng rng(derive_seed(seed, j));
    const auto& rows = leaves[j]->rows;
    plan.chosen.push_back(rows[rng.uniform_index(rows.size())]);
  }
  plan.evaluations = plan.chosen.size();
  return plan;
}

SamplePlan sample_s2(const ClusterTree& tree) {
  SamplePlan plan{SamplingPolicy::S2, {}, 0};
  for (const auto* leaf : tree.leaves()) {
    if (leaf->rows.size() == 1) {
      plan.chosen.push_back(leaf->rows.front());
      continue;
    }
    const auto line = find_poles(leaf->rows, leaf->seed);
    plan.chosen.push_back(line.west);
    plan.chosen.push_back(line.east);
  }
  plan.evaluations = plan.chosen.size();
  return plan;
}

SamplePlan sample_s3(const ClusterTree& tree) {
  SamplePlan plan{SamplingPolicy::S3, {}, 0};
  const MeasuredConfig* best = nullptr;
  std::size_t best_pos = 0;
  for (const auto* leaf : tree.leaves()) {
    for (std::size_t i = 0; i < leaf->rows.size(); ++i) {
      const auto& row = leaf->rows[i];
      const auto pos = leaf->positions[i];
      if (best == nullptr || row.performance < best->performance ||
          (row.performance == best->performance && pos < best_pos)) {
        best = &row;
        best_pos = pos;
      }
      ++plan.evaluations;
    }
  }
  if (best != nullptr) plan.chosen.push_back(*best);
  return plan;
}

namespace {

// First `count` entries of a seeded Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> partial_shuffle(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace

SamplePlan sample_random_k(std::span<const MeasuredConfig> rows, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > rows.size()) {
    throw ParameterError("random sample size " + std::to_string(k) + " outside [1, " +
                         std::to_string(rows.size()) + "]");
  }
  SamplePlan plan{SamplingPolicy::RandomK, {}, 0};
  for (auto i : partial_shuffle(rows.size(), k, seed)) plan.chosen.push_back(rows[i]);
  plan.evaluations = plan.chosen.size();
  return plan;
}

SamplePlan sample_progressive_2n(std::span<const MeasuredConfig> rows, std::size_t n_features,
                                 std::size_t rounds, std::uint64_t seed) {
  if (rounds < 1) throw ParameterError("progressive sampling needs at least one round");
  if (n_features < 1) throw ParameterError("progressive sampling needs at least one feature");
  const std::size_t wanted = rounds * n_features;
  if (wanted > rows.size()) {
    throw ParameterError("progressive sampling wants " + std::to_string(wanted) + " rows but only " +
                         std::to_string(rows.size()) + " are available");
  }
  // Each round extends the same permutation, so earlier rounds are a
  // prefix of later ones.
  SamplePlan plan{SamplingPolicy::Progressive2N, {}, 0};
  for (auto i : partial_shuffle(rows.size(), wanted, seed)) plan.chosen.push_back(rows[i]);
  plan.evaluations = plan.chosen.size();
  return plan;
}

SamplePlan sample_full(std::span<const MeasuredConfig> rows) {
  SamplePlan plan{SamplingPolicy::Full, {rows.begin(), rows.end()}, 0};
  plan.evaluations = plan.chosen.size();
  return plan;
}

std::string to_json(const SamplePlan& plan) {
  std::vector<std::size_t> ids;
  ids.reserve(plan.chosen.size());
  for (const auto& row : plan.chosen) ids.push_back(row.id);
  nlohmann::json j{{"policy", to_string(plan.policy)}, {"row_ids", ids}, {"evaluations", plan.evaluations}};
  return j.dump(2);
}

}  // namespace confperf

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confperf/dataset.hpp"
#include "confperf/spectral.hpp"

namespace confperf {

enum class SamplingPolicy {
  S1,             ///< one random row per leaf
  S2,             ///< east and west poles of every leaf
  S3,             ///< measure everything, keep the best row
  RandomK,        ///< k uniform rows, no clustering
  Progressive2N,  ///< rounds * n_features uniform rows
  Full,           ///< the whole training set (oracle baseline)
};

std::string_view to_string(SamplingPolicy policy);
/// Accepts "s1", "s2", "s3", "random", "progressive", "full" (any case).
SamplingPolicy parse_policy(std::string_view name);

/// Rows whose performance was looked up, and how many lookups it cost.
struct SamplePlan {
  SamplingPolicy policy = SamplingPolicy::S1;
  std::vector<MeasuredConfig> chosen;
  std::size_t evaluations = 0;
};

SamplePlan sample_s1(const ClusterTree& tree, std::uint64_t seed);

/// Poles are recomputed inside each leaf with the leaf's own seed; a
/// single-row leaf contributes that row only.
SamplePlan sample_s2(const ClusterTree& tree);

/// Picks the best (lowest performance) row over all leaves, lowest position
/// on ties, and charges one evaluation per clustered row.
SamplePlan sample_s3(const ClusterTree& tree);

SamplePlan sample_random_k(std::span<const MeasuredConfig> rows, std::size_t k, std::uint64_t seed);

/// Cumulative random sample grown in steps of n_features rows.
SamplePlan sample_progressive_2n(std::span<const MeasuredConfig> rows, std::size_t n_features,
                                 std::size_t rounds, std::uint64_t seed);

SamplePlan sample_full(std::span<const MeasuredConfig> rows);

/// {"policy", "row_ids", "evaluations"}
std::string to_json(const SamplePlan& plan);

}  // namespace confperf

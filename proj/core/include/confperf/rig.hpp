#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confperf/cart.hpp"
#include "confperf/dataset.hpp"
#include "confperf/sampling.hpp"
#include "confperf/spectral.hpp"

namespace confperf {

/// Magnitude of relative error in percent. Throws DataError when actual <= 0.
double mre(double predicted, double actual);

/// Mean MRE of the tree over `rows`.
double mean_mre(const RegressionTree& tree, std::span<const MeasuredConfig> rows);

/// How a rig (or the CLI) picks rows to measure from a training set.
struct PolicySpec {
  SamplingPolicy policy = SamplingPolicy::S1;
  double leaf_threshold_multiplier = 1.0;  ///< S1/S2/S3
  std::size_t k = 16;                      ///< RandomK
  std::size_t rounds = 2;                  ///< Progressive2N
};

/// Clusters (when the policy needs it) and samples `train`.
SamplePlan run_policy(const ConfigDataset& train, const PolicySpec& spec, std::uint64_t seed);

/// Outcome of one (repeat, fraction) cell.
struct RigCell {
  std::uint64_t seed = 0;
  double mre = 0.0;
  std::size_t evaluations = 0;
  std::size_t train_rows = 0;
};

struct FractionResult {
  double fraction = 0.0;
  double mean_mre = 0.0;
  double std_mre = 0.0;
  double mean_evaluations = 0.0;
  std::vector<RigCell> cells;  ///< one per repeat
};

struct RigReport {
  std::string dataset;
  std::string policy;
  std::uint64_t base_seed = 0;
  std::size_t repeats = 0;
  std::vector<std::uint64_t> seeds;  ///< shuffle seed of each repeat
  std::vector<FractionResult> fractions;
  /// Smallest fraction whose mean MRE is within elbow_tolerance of the grid minimum.
  double elbow_fraction = 0.0;
  double elbow_tolerance = 1.0;
};

struct RigParams {
  PolicySpec policy{};
  CartParams cart{};
  std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::size_t repeats = 20;
  std::uint64_t base_seed = 1;
  double elbow_tolerance = 1.0;
};

/// Seed used to shuffle the data for repeat `r`.
std::uint64_t repeat_seed(std::uint64_t base_seed, std::size_t r);

/// For every repeat the rows are shuffled once (seeded by repeat_seed) and
/// every fraction X takes the first X% as train: the policy samples train,
/// CART is fit on the sampled rows and scored by mean MRE on the test rows.
RigReport run_rig(const ConfigDataset& dataset, const RigParams& params);

std::string to_json(const RigReport& report);
std::string to_text(const RigReport& report);
/// "fraction,mean_mre,std_mre,mean_evaluations" curve.
std::string to_csv(const RigReport& report);

}  // namespace confperf

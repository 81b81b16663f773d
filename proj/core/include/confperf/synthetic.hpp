#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "confperf/dataset.hpp"

namespace confperf {

struct AdditiveSpace {
  std::size_t features = 10;
  double base = 100.0;
  /// Per-feature contribution; defaults to weight_scale * 2^-i, so a few
  /// options dominate and the rest matter less and less.
  std::vector<double> weights;
  double weight_scale = 100.0;
  /// Standard deviation of the multiplicative noise factor.
  double noise = 0.01;
  std::uint64_t seed = 0;
};

/// Every configuration of `features` options (2^features rows, feature 0 as
/// the most significant bit), performance = (base + sum of active weights)
/// times (1 + noise * N(0, 1)).
ConfigDataset additive_dataset(const AdditiveSpace& space);

}  // namespace confperf

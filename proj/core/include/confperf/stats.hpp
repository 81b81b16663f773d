#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace confperf {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> xs);

/// Vargha-Delaney A12: probability that a value from xs exceeds one from ys,
/// counting ties as half. Throws ParameterError for an empty list.
double a12(std::span<const double> xs, std::span<const double> ys);

/// A12 effect below this (in either direction) counts as "small".
inline constexpr double kSmallEffect = 0.6;

struct BootstrapParams {
  std::size_t iterations = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
};

/// Two-sided bootstrap test on the difference of means. The null
/// distribution is built by resampling both groups, with replacement, from
/// the pooled values; the difference is significant when the observed
/// |mean(xs) - mean(ys)| is reached by fewer than (1 - confidence) of the
/// resampled differences.
bool bootstrap_significant(std::span<const double> xs, std::span<const double> ys,
                           const BootstrapParams& params = {});

struct RankEntry {
  std::string name;
  int rank = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double evaluations = 0.0;
  std::size_t n = 0;
};

/// Methods sorted by mean, with Scott-Knott ranks.
struct RankTable {
  std::vector<RankEntry> entries;
};

struct ScottKnottParams {
  BootstrapParams bootstrap{};
  double small_effect = kSmallEffect;
};

/// Scott-Knott ranking. Groups are sorted by mean (ties by input order),
/// then split recursively at the cut maximizing the between-group sum of
/// squares. A cut is kept only if the two sides differ under the bootstrap
/// test and A12 is at least `small_effect`. Ranks are dense from 1.
/// Throws ParameterError when there are no groups or a group is empty.
RankTable scott_knott(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                      const ScottKnottParams& params = {});

std::string to_json(const RankTable& table);
std::string to_text(const RankTable& table);

}  // namespace confperf

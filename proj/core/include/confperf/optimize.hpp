#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "confperf/cart.hpp"
#include "confperf/dataset.hpp"

namespace confperf {

struct DeParams {
  std::size_t population = 30;
  std::size_t generations = 50;
  double crossover_rate = 0.7;
  double differential_weight = 0.5;
  std::uint64_t seed = 0;
  /// Random draws allowed while filling the initial population.
  std::size_t max_init_attempts = 100000;

  void validate() const;
};

/// Must be pure and deterministic.
using ValidityPredicate = std::function<bool(const Configuration&)>;
using Objective = std::function<double(const Configuration&)>;

inline bool always_valid(const Configuration&) { return true; }

struct OptimizationResult {
  Configuration best_config;
  double predicted_performance = 0.0;
  std::size_t surrogate_calls = 0;
  std::size_t rejected_trials = 0;
  /// Best value after initialization, then after every generation.
  std::vector<double> history;
};

/// Binary differential evolution minimizing `objective`.
///
/// The initial population is drawn uniformly and filtered by `validity`.
/// For every target a trial is built bit by bit: with probability
/// crossover_rate (and always at one random index) the bit comes from the
/// mutant, otherwise from the target. The mutant bit is the majority of
/// three distinct donors, flipped with probability min(1, F) wherever the
/// donors disagree. Invalid trials are discarded without calling the
/// objective; a valid trial replaces its target when strictly better.
/// Replacement happens once per generation.
///
/// Throws NumericError when no valid configuration turns up within
/// max_init_attempts draws.
OptimizationResult de_optimize(const Objective& objective, std::size_t arity,
                               const ValidityPredicate& validity, const DeParams& params);

/// Same, with a regression tree as the surrogate.
OptimizationResult de_optimize(const RegressionTree& surrogate, std::size_t arity,
                               const ValidityPredicate& validity, const DeParams& params);

/// Conjunction of "bit i must equal v" clauses.
struct ClauseValidity {
  struct Clause {
    std::size_t bit = 0;
    bool value = false;
  };
  std::vector<Clause> clauses;

  bool operator()(const Configuration& config) const;
};

/// Parses {"clauses": [{"bit": 3, "value": true}, ...]}. Throws DataError.
ClauseValidity validity_from_json(std::string_view json);

std::string to_json(const OptimizationResult& result);

}  // namespace confperf

#include "confperf/optimize.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"

#include "confperf/error.hpp"
#include "confperf/rng.hpp"

namespace confperf {

void DeParams::validate() const {
  if (population < 4) throw ParameterError("DE population must be at least 4");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw ParameterError("DE crossover rate must lie in [0, 1]");
  }
  if (!(differential_weight >= 0.0)) throw ParameterError("DE differential weight must be non-negative");
  if (max_init_attempts < 1) throw ParameterError("DE needs at least one initialization attempt");
}

namespace {

Configuration random_config(std::size_t arity, Rng& rng) {
  std::vector<std::uint8_t> bits(arity);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
  return Configuration(std::move(bits));
}

std::size_t argmin(const std::vector<double>& values) {
  return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

OptimizationResult de_optimize(const Objective& objective, std::size_t arity, const ValidityPredicate& validity,
                               const DeParams& params) {
  params.validate();
  if (arity < 1) throw ParameterError("DE needs at least one option");

  Rng rng(params.seed);
  OptimizationResult result;

  std::vector<Configuration> population;
  std::size_t attempts = 0;
  while (population.size() < params.population && attempts < params.max_init_attempts) {
    ++attempts;
    auto candidate = random_config(arity, rng);
    if (validity(candidate)) population.push_back(std::move(candidate));
  }
  if (population.empty()) {
    throw NumericError("no valid configuration found within " + std::to_string(params.max_init_attempts) +
                       " random draws");
  }
  // A sparse valid region may leave the population short; reuse what was found.
  for (std::size_t i = 0; population.size() < params.population; ++i) population.push_back(population[i]);

  std::vector<double> fitness(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    fitness[i] = objective(population[i]);
    ++result.surrogate_calls;
  }
  result.history.push_back(fitness[argmin(fitness)]);

  const std::size_t n = population.size();
  const double flip = std::min(1.0, params.differential_weight);
  std::vector<Configuration> next(population);
  std::vector<double> next_fitness(fitness);
  for (std::size_t gen = 0; gen < params.generations; ++gen) {
    for (std::size_t target = 0; target < n; ++target) {
      std::size_t donors[3];
      for (std::size_t d = 0; d < 3; ++d) {
        std::size_t pick;
        do {
          pick = rng.uniform_index(n);
        } while (pick == target || std::find(donors, donors + d, pick) != donors + d);
        donors[d] = pick;
      }
      const auto& a = population[donors[0]];
      const auto& b = population[donors[1]];
      const auto& c = population[donors[2]];

      Configuration trial = population[target];
      const auto forced = rng.uniform_index(arity);
      for (std::size_t j = 0; j < arity; ++j) {
        if (j != forced && !rng.bernoulli(params.crossover_rate)) continue;
        const int votes = a[j] + b[j] + c[j];
        bool bit = votes >= 2;
        if (votes == 1 || votes == 2) {
          if (rng.bernoulli(flip)) bit = !bit;
        }
        trial.set(j, bit);
      }

      if (!validity(trial)) {
        ++result.rejected_trials;
        continue;
      }
      const double value = objective(trial);
      ++result.surrogate_calls;
      if (value < fitness[target]) {
        next[target] = std::move(trial);
        next_fitness[target] = value;
      }
    }
    population = next;
    fitness = next_fitness;
    result.history.push_back(fitness[argmin(fitness)]);
  }

  const auto best = argmin(fitness);
  result.best_config = population[best];
  result.predicted_performance = fitness[best];
  return result;
}

OptimizationResult de_optimize(const RegressionTree& surrogate, std::size_t arity, const ValidityPredicate& validity,
                               const DeParams& params) {
  if (surrogate.arity() != arity) {
    throw DataError("surrogate arity " + std::to_string(surrogate.arity()) + " does not match requested arity " +
                    std::to_string(arity));
  }
  return de_optimize([&](const Configuration& c) { return surrogate.predict(c); }, arity, validity, params);
}

bool ClauseValidity::operator()(const Configuration& config) const {
  for (const auto& clause : clauses) {
    if (clause.bit >= config.size() || config[clause.bit] != clause.value) return false;
  }
  return true;
}

ClauseValidity validity_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    ClauseValidity validity;
    for (const auto& c : j.at("clauses")) {
      const auto& v = c.at("value");
      bool value = false;
      if (v.is_boolean()) {
        value = v.get<bool>();
      } else if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1)) {
        value = v.get<int>() == 1;
      } else {
        throw DataError("clause value must be true/false or 0/1");
      }
      const auto& bit = c.at("bit");
      if (!bit.is_number_unsigned()) throw DataError("clause bit must be a non-negative integer");
      validity.clauses.push_back({bit.get<std::size_t>(), value});
    }
    return validity;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed validity JSON: ") + e.what());
  }
}

std::string to_json(const OptimizationResult& result) {
  nlohmann::json j{{"best_config", result.best_config.to_string()},
                   {"predicted_performance", result.predicted_performance},
                   {"surrogate_calls", result.surrogate_calls},
                   {"rejected_trials", result.rejected_trials},
                   {"history", result.history}};
  return j.dump(2);
}

}  // namespace confperf

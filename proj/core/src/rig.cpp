#include "confperf/rig.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "confperf/error.hpp"
#include "confperf/rng.hpp"
#include "confperf/stats.hpp"

namespace confperf {

namespace {

std::string shortest(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

double mre(double predicted, double actual) {
  if (!(actual > 0.0)) throw DataError("MRE needs a positive actual value");
  return std::abs(predicted - actual) / actual * 100.0;
}

double mean_mre(const RegressionTree& tree, std::span<const MeasuredConfig> rows) {
  if (rows.empty()) throw DataError("cannot score a model on zero rows");
  double sum = 0.0;
  for (const auto& row : rows) sum += mre(tree.predict(row.config), row.performance);
  return sum / static_cast<double>(rows.size());
}

SamplePlan run_policy(const ConfigDataset& train, const PolicySpec& spec, std::uint64_t seed) {
  if (train.empty()) throw ParameterError("training set is empty; use a larger fraction");
  const auto cluster_seed = derive_seed(seed, 1);
  const auto sample_seed = derive_seed(seed, 2);
  switch (spec.policy) {
    case SamplingPolicy::S1:
      return sample_s1(where_cluster(train.rows(), {spec.leaf_threshold_multiplier, cluster_seed}), sample_seed);
    case SamplingPolicy::S2:
      return sample_s2(where_cluster(train.rows(), {spec.leaf_threshold_multiplier, cluster_seed}));
    case SamplingPolicy::S3:
      return sample_s3(where_cluster(train.rows(), {spec.leaf_threshold_multiplier, cluster_seed}));
    case SamplingPolicy::RandomK:
      return sample_random_k(train.rows(), spec.k, sample_seed);
    case SamplingPolicy::Progressive2N:
      return sample_progressive_2n(train.rows(), train.arity(), spec.rounds, sample_seed);
    case SamplingPolicy::Full:
      return sample_full(train.rows());
  }
  throw ParameterError("unknown sampling policy");
}

std::uint64_t repeat_seed(std::uint64_t base_seed, std::size_t r) { return derive_seed(base_seed, r); }

RigReport run_rig(const ConfigDataset& dataset, const RigParams& params) {
  if (params.repeats < 1) throw ParameterError("the rig needs at least one repeat");
  if (params.fractions.empty()) throw ParameterError("the rig needs at least one train fraction");
  for (double x : params.fractions) {
    if (!(x > 0.0 && x < 1.0)) throw ParameterError("train fractions must lie in (0, 1)");
  }
  params.cart.validate();

  RigReport report;
  report.dataset = dataset.name();
  report.policy = std::string(to_string(params.policy.policy));
  report.base_seed = params.base_seed;
  report.repeats = params.repeats;
  report.elbow_tolerance = params.elbow_tolerance;
  for (double x : params.fractions) report.fractions.push_back({x, 0.0, 0.0, 0.0, {}});

  for (std::size_t r = 0; r < params.repeats; ++r) {
    const auto shuffle_seed = repeat_seed(params.base_seed, r);
    report.seeds.push_back(shuffle_seed);
    for (std::size_t fi = 0; fi < params.fractions.size(); ++fi) {
      // Same seed for every fraction: one shuffle per repeat, growing prefixes.
      const auto split = shuffle_split(dataset, params.fractions[fi], shuffle_seed);
      const auto cell_seed = derive_seed(shuffle_seed, 1000 + fi);
      const auto plan = run_policy(split.train, params.policy, cell_seed);
      const auto model = fit(plan.chosen, params.cart);
      report.fractions[fi].cells.push_back(
          {cell_seed, mean_mre(model, split.test.rows()), plan.evaluations, split.train.size()});
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (auto& f : report.fractions) {
    std::vector<double> mres, evals;
    for (const auto& c : f.cells) {
      mres.push_back(c.mre);
      evals.push_back(static_cast<double>(c.evaluations));
    }
    f.mean_mre = mean(mres);
    f.std_mre = sample_stddev(mres);
    f.mean_evaluations = mean(evals);
    best = std::min(best, f.mean_mre);
  }
  report.elbow_fraction = std::numeric_limits<double>::infinity();
  for (const auto& f : report.fractions) {
    if (f.mean_mre <= best + params.elbow_tolerance) report.elbow_fraction = std::min(report.elbow_fraction, f.fraction);
  }
  return report;
}

std::string to_json(const RigReport& report) {
  nlohmann::json j;
  j["dataset"] = report.dataset;
  j["policy"] = report.policy;
  j["base_seed"] = report.base_seed;
  j["repeats"] = report.repeats;
  j["seeds"] = report.seeds;
  j["elbow_fraction"] = report.elbow_fraction;
  j["elbow_tolerance"] = report.elbow_tolerance;
  auto& fr = j["fractions"] = nlohmann::json::array();
  for (const auto& f : report.fractions) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : f.cells) {
      cells.push_back({{"seed", c.seed}, {"mre", c.mre}, {"evaluations", c.evaluations}, {"train_rows", c.train_rows}});
    }
    fr.push_back({{"fraction", f.fraction},
                  {"mean_mre", f.mean_mre},
                  {"std_mre", f.std_mre},
                  {"mean_evaluations", f.mean_evaluations},
                  {"repeats", cells}});
  }
  return j.dump(2);
}

std::string to_text(const RigReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "dataset %s  policy %s  repeats %zu  seed %llu\n", report.dataset.c_str(),
                report.policy.c_str(), report.repeats, static_cast<unsigned long long>(report.base_seed));
  out += line;
  std::snprintf(line, sizeof line, "%8s  %10s  %10s  %12s\n", "X", "mean_mre", "std_mre", "evaluations");
  out += line;
  for (const auto& f : report.fractions) {
    std::snprintf(line, sizeof line, "%7.0f%%  %10.2f  %10.2f  %12.1f\n", f.fraction * 100.0, f.mean_mre, f.std_mre,
                  f.mean_evaluations);
    out += line;
  }
  std::snprintf(line, sizeof line, "elbow at X = %.0f%% (within %.2f of the best mean MRE)\n",
                report.elbow_fraction * 100.0, report.elbow_tolerance);
  out += line;
  return out;
}

std::string to_csv(const RigReport& report) {
  std::string out = "fraction,mean_mre,std_mre,mean_evaluations\n";
  for (const auto& f : report.fractions) {
    out += shortest(f.fraction) + ',' + shortest(f.mean_mre) + ',' + shortest(f.std_mre) + ',' +
           shortest(f.mean_evaluations) + '\n';
  }
  return out;
}

}  // namespace confperf

#include "doctest.h"

#include "confperf/error.hpp"
#include "confperf/rig.hpp"
#include "confperf/synthetic.hpp"
#include "generators.hpp"

using namespace confperf;

namespace {

// Performance depends on two of eight options only, so any training set
// covering the four combinations lets CART recover it exactly.
ConfigDataset two_option_space() {
  std::vector<std::string> names;
  for (int f = 0; f < 8; ++f) names.push_back("o" + std::to_string(f));
  std::vector<MeasuredConfig> rows;
  for (const auto& c : testing::all_configs(8)) {
    rows.push_back({c, 10.0 + 5.0 * c[2] + 2.0 * c[6], rows.size()});
  }
  return ConfigDataset("two_option", names, rows);
}

}  // namespace

TEST_CASE("mre examples") {
  CHECK(mre(100, 100) == 0.0);
  CHECK(mre(110, 100) == doctest::Approx(10.0));
  CHECK((mre(90, 100) + mre(120, 100)) / 2.0 == doctest::Approx(15.0));
  CHECK_THROWS_AS(mre(1, 0), DataError);
  CHECK_THROWS_AS(mre(1, -2), DataError);
}

TEST_CASE("mean_mre over rows") {
  const std::vector<MeasuredConfig> train{{Configuration{0}, 100, 0}, {Configuration{1}, 100, 1}};
  const auto tree = fit(train, {2, 1, {}});
  const std::vector<MeasuredConfig> test{{Configuration{0}, 90, 0}, {Configuration{1}, 120, 1}};
  CHECK(mean_mre(tree, test) == doctest::Approx((100.0 / 9.0 + 100.0 / 6.0) / 2.0));
  CHECK_THROWS_AS(mean_mre(tree, std::vector<MeasuredConfig>{}), DataError);
}

TEST_CASE("oracle policy on a realizable function scores zero everywhere") {
  RigParams params;
  params.policy.policy = SamplingPolicy::Full;
  params.repeats = 5;
  const auto report = run_rig(two_option_space(), params);
  for (const auto& f : report.fractions) CHECK(f.mean_mre == doctest::Approx(0.0));
}

TEST_CASE("report shape follows the grid and repeats") {
  RigParams params;
  params.repeats = 20;
  const auto report = run_rig(additive_dataset({8, 100, {}, 100, 0.01, 1}), params);
  REQUIRE(report.fractions.size() == 9);
  CHECK(report.repeats == 20);
  CHECK(report.seeds.size() == 20);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(report.fractions[i].fraction == doctest::Approx(0.1 * static_cast<double>(i + 1)));
    CHECK(report.fractions[i].cells.size() == 20);
    CHECK(report.fractions[i].mean_mre >= 0.0);
    CHECK(report.fractions[i].std_mre >= 0.0);
  }
  CHECK(report.elbow_fraction >= 0.1);
  CHECK(report.elbow_fraction <= 0.9);
}

TEST_CASE("rig output is deterministic") {
  RigParams params;
  params.repeats = 3;
  params.fractions = {0.2, 0.4};
  const auto ds = additive_dataset({7, 100, {}, 100, 0.01, 2});
  CHECK(to_json(run_rig(ds, params)) == to_json(run_rig(ds, params)));
  params.base_seed = 2;
  const auto other = to_json(run_rig(ds, params));
  params.base_seed = 1;
  CHECK(other != to_json(run_rig(ds, params)));
}

TEST_CASE("full training set beats S1 on the synthetic space") {
  const auto ds = additive_dataset({10, 100, {}, 100, 0.01, 0});
  RigParams params;
  params.fractions = {0.2, 0.4, 0.6};
  const auto s1 = run_rig(ds, params);
  params.policy.policy = SamplingPolicy::Full;
  const auto full = run_rig(ds, params);
  for (std::size_t i = 0; i < params.fractions.size(); ++i) {
    CHECK(full.fractions[i].mean_mre <= s1.fractions[i].mean_mre);
    CHECK(full.fractions[i].mean_evaluations > s1.fractions[i].mean_evaluations);
  }
}

TEST_CASE("every policy runs through the rig") {
  const auto ds = additive_dataset({8, 100, {}, 100, 0.01, 3});
  for (auto p : {SamplingPolicy::S1, SamplingPolicy::S2, SamplingPolicy::S3, SamplingPolicy::RandomK,
                 SamplingPolicy::Progressive2N, SamplingPolicy::Full}) {
    RigParams params;
    params.policy.policy = p;
    params.repeats = 2;
    params.fractions = {0.4};
    const auto report = run_rig(ds, params);
    CHECK(report.policy == std::string(to_string(p)));
    CHECK(report.fractions[0].mean_evaluations > 0.0);
  }
  RigParams s3;
  s3.policy.policy = SamplingPolicy::S3;
  s3.repeats = 1;
  s3.fractions = {0.4};
  CHECK(run_rig(ds, s3).fractions[0].mean_evaluations == doctest::Approx(train_size(0.4, ds.size())));
}

TEST_CASE("rig errors and report formats") {
  const auto ds = additive_dataset({6, 100, {}, 100, 0.01, 4});
  RigParams params;
  params.repeats = 0;
  CHECK_THROWS_AS(run_rig(ds, params), ParameterError);
  params.repeats = 1;
  params.fractions = {1.2};
  CHECK_THROWS_AS(run_rig(ds, params), ParameterError);
  params.fractions = {0.01};  // floor(0.64) = 0 training rows
  CHECK_THROWS_AS(run_rig(ds, params), ParameterError);

  params.fractions = {0.5};
  const auto report = run_rig(ds, params);
  CHECK(to_csv(report).rfind("fraction,mean_mre,std_mre,mean_evaluations\n0.5,", 0) == 0);
  CHECK(to_text(report).find("50%") != std::string::npos);
}

TEST_CASE("elbow is the first fraction within tolerance of the best") {
  RigParams params;
  params.repeats = 4;
  params.policy.policy = SamplingPolicy::Full;
  params.elbow_tolerance = 1000.0;
  const auto ds = additive_dataset({8, 100, {}, 100, 0.01, 5});
  CHECK(run_rig(ds, params).elbow_fraction == doctest::Approx(0.1));
  params.elbow_tolerance = 0.0;
  const auto strict = run_rig(ds, params);
  double best = 1e9, at = 0;
  for (const auto& f : strict.fractions) {
    if (f.mean_mre < best) {
      best = f.mean_mre;
      at = f.fraction;
    }
  }
  CHECK(strict.elbow_fraction == doctest::Approx(at));
}

#include <map>

#include <benchmark/benchmark.h>

#include "confperf/cart.hpp"
#include "confperf/intrinsic.hpp"
#include "confperf/rig.hpp"
#include "confperf/sampling.hpp"
#include "confperf/spectral.hpp"
#include "confperf/synthetic.hpp"

namespace {

using namespace confperf;

const ConfigDataset& space(std::size_t features) {
  static std::map<std::size_t, ConfigDataset> cache;
  auto it = cache.find(features);
  if (it == cache.end()) it = cache.emplace(features, additive_dataset({features, 100, {}, 100, 0.01, 1})).first;
  return it->second;
}

void BM_Distance(benchmark::State& state) {
  const auto& rows = space(10).rows();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance(rows[i % rows.size()].config, rows[(i * 7 + 3) % rows.size()].config));
    ++i;
  }
}
BENCHMARK(BM_Distance);

void BM_WhereCluster(benchmark::State& state) {
  const auto& ds = space(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(where_cluster(ds.rows(), {1.0, 7}));
  state.SetComplexityN(static_cast<long>(ds.size()));
}
BENCHMARK(BM_WhereCluster)->DenseRange(8, 14, 2)->Complexity();

void BM_SampleS1(benchmark::State& state) {
  const auto tree = where_cluster(space(12).rows(), {1.0, 7});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_s1(tree, ++seed));
}
BENCHMARK(BM_SampleS1);

void BM_FitCart(benchmark::State& state) {
  const auto& ds = space(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit(ds.rows(), {}));
  state.SetComplexityN(static_cast<long>(ds.size()));
}
BENCHMARK(BM_FitCart)->DenseRange(6, 12, 2)->Complexity();

void BM_RigRepeat(benchmark::State& state) {
  RigParams params;
  params.repeats = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_rig(space(10), params));
}
BENCHMARK(BM_RigRepeat)->Unit(benchmark::kMillisecond);

void BM_IntrinsicDimension(benchmark::State& state) {
  std::vector<Configuration> configs;
  for (const auto& r : space(10).rows()) configs.push_back(r.config);
  const auto points = to_points(configs);
  for (auto _ : state) benchmark::DoNotOptimize(intrinsic_dimension(points));
}
BENCHMARK(BM_IntrinsicDimension)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

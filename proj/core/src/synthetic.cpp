#include "confperf/synthetic.hpp"

#include <cmath>
#include <string>

#include "confperf/error.hpp"
#include "confperf/rng.hpp"

namespace confperf {

ConfigDataset additive_dataset(const AdditiveSpace& space) {
  if (space.features < 1 || space.features > 24) throw ParameterError("additive space needs 1..24 features");
  std::vector<double> weights = space.weights;
  if (weights.empty()) {
    for (std::size_t i = 0; i < space.features; ++i) weights.push_back(std::ldexp(space.weight_scale, -static_cast<int>(i)));
  }
  if (weights.size() != space.features) throw ParameterError("one weight per feature required");

  std::vector<std::string> names;
  for (std::size_t i = 0; i < space.features; ++i) names.push_back("f" + std::to_string(i));

  Rng rng(space.seed);
  const std::size_t n = std::size_t{1} << space.features;
  std::vector<MeasuredConfig> rows;
  rows.reserve(n);
  for (std::size_t code = 0; code < n; ++code) {
    std::vector<std::uint8_t> bits(space.features);
    double perf = space.base;
    for (std::size_t f = 0; f < space.features; ++f) {
      bits[f] = static_cast<std::uint8_t>((code >> (space.features - 1 - f)) & 1U);
      if (bits[f]) perf += weights[f];
    }
    perf *= 1.0 + space.noise * rng.normal();
    if (!(perf > 0.0)) throw NumericError("additive space produced a non-positive performance");
    rows.push_back({Configuration(std::move(bits)), perf, code});
  }
  return ConfigDataset("additive" + std::to_string(space.features), std::move(names), std::move(rows));
}

}  // namespace confperf

#include "confperf/intrinsic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "confperf/error.hpp"
#include "confperf/spectral.hpp"

namespace confperf {

std::vector<Point> to_points(const std::vector<Configuration>& configs) {
  std::vector<Point> points;
  points.reserve(configs.size());
  for (const auto& c : configs) points.emplace_back(c.bits().begin(), c.bits().end());
  return points;
}

double correlation_sum(const std::vector<Point>& points, double r) {
  if (points.size() < 2) throw ParameterError("correlation sum needs at least two points");
  if (!(r > 0.0)) throw ParameterError("correlation sum radius must be positive");
  const std::size_t k = points.size();
  std::size_t close = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) close += distance(points[i], points[j]) < r;
  }
  return 2.0 * static_cast<double>(close) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

PairDistances::PairDistances(const std::vector<Point>& points) {
  if (points.size() < 2) throw ParameterError("pair distances need at least two points");
  const std::size_t k = points.size();
  sorted_.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) sorted_.push_back(distance(points[i], points[j]));
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double PairDistances::correlation_sum(double r) const {
  const auto below = std::lower_bound(sorted_.begin(), sorted_.end(), r) - sorted_.begin();
  return static_cast<double>(below) / static_cast<double>(sorted_.size());
}

double PairDistances::next_above(double r) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), r);
  return it == sorted_.end() ? r : *it;
}

double PairDistances::quantile(double q) const {
  q = std::clamp(q, 0.0, 1.0);
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted_.size())));
  return sorted_[rank == 0 ? 0 : rank - 1];
}

namespace {

DimensionEstimate estimate(const PairDistances& pairs, double r0, double rmax, std::size_t steps) {
  if (!(r0 > 0.0 && r0 < rmax)) throw ParameterError("radius range must satisfy 0 < r0 < rmax");
  if (steps < 2) throw ParameterError("need at least two radius steps");

  DimensionEstimate est;
  const double log_r0 = std::log(r0);
  const double log_span = std::log(rmax) - log_r0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double r = std::exp(log_r0 + log_span * static_cast<double>(i) / static_cast<double>(steps - 1));
    const double c = pairs.correlation_sum(r);
    est.r_values.push_back(r);
    est.c_values.push_back(c);
    est.log_c_values.push_back(c > 0.0 ? std::log(c) : std::numeric_limits<double>::quiet_NaN());
  }
  for (std::size_t i = 0; i + 1 < steps; ++i) {
    if (est.c_values[i] <= 0.0 || est.c_values[i + 1] <= 0.0) continue;
    const double slope = (est.log_c_values[i + 1] - est.log_c_values[i]) /
                         (std::log(est.r_values[i + 1]) - std::log(est.r_values[i]));
    if (std::isfinite(slope)) est.slopes.push_back(slope);
  }
  if (est.slopes.empty()) throw NumericError("no finite slope on the radius grid; the point set is degenerate");
  double sum = 0.0;
  for (double s : est.slopes) sum += s;
  est.dimension = sum / static_cast<double>(est.slopes.size());
  return est;
}

std::string shortest(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

DimensionEstimate intrinsic_dimension(const std::vector<Point>& points, double r0, double rmax, std::size_t steps) {
  if (!(r0 > 0.0 && r0 < rmax)) throw ParameterError("radius range must satisfy 0 < r0 < rmax");
  return estimate(PairDistances(points), r0, rmax, steps);
}

DimensionEstimate intrinsic_dimension(const std::vector<Point>& points, const DimensionGrid& grid) {
  if (!(grid.low_quantile >= 0.0 && grid.low_quantile < grid.high_quantile && grid.high_quantile <= 1.0)) {
    throw ParameterError("radius quantiles must satisfy 0 <= low < high <= 1");
  }
  const PairDistances pairs(points);
  double r0 = pairs.quantile(grid.low_quantile);
  // C(r) counts pairs strictly below r, so on discrete (Boolean) distances
  // the range must end past the high-quantile distance to include it.
  const double rmax = pairs.next_above(pairs.quantile(grid.high_quantile));
  if (r0 <= 0.0) {
    // Coincident points; start from the smallest positive distance instead.
    for (double q = grid.low_quantile; q <= grid.high_quantile && r0 <= 0.0; q += 1e-3) r0 = pairs.quantile(q);
  }
  if (!(r0 > 0.0 && r0 < rmax)) throw NumericError("pairwise distances are too concentrated to span a radius range");
  return estimate(pairs, r0, rmax, grid.steps);
}

std::string to_json(const DimensionEstimate& estimate) {
  nlohmann::json j;
  j["dimension"] = estimate.dimension;
  j["r"] = estimate.r_values;
  j["C"] = estimate.c_values;
  j["slopes"] = estimate.slopes;
  return j.dump(2);
}

std::string to_csv(const DimensionEstimate& estimate) {
  std::string out = "r,C\n";
  for (std::size_t i = 0; i < estimate.r_values.size(); ++i) {
    out += shortest(estimate.r_values[i]) + ',' + shortest(estimate.c_values[i]) + '\n';
  }
  return out;
}

}  // namespace confperf

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "confperf/dataset.hpp"

namespace confperf {

using Point = std::vector<double>;

/// Embeds configurations as 0/1 vectors.
std::vector<Point> to_points(const std::vector<Configuration>& configs);

/// Fraction of point pairs closer than r. Throws ParameterError for fewer
/// than two points or r <= 0.
double correlation_sum(const std::vector<Point>& points, double r);

/// Sorted pairwise distances; correlation sums over many radii are binary
/// searches into this.
class PairDistances {
 public:
  explicit PairDistances(const std::vector<Point>& points);

  std::size_t pair_count() const noexcept { return sorted_.size(); }
  double correlation_sum(double r) const;
  /// Distance at quantile q in [0, 1] (nearest rank).
  double quantile(double q) const;
  /// Smallest observed distance greater than r, or r when there is none.
  double next_above(double r) const;

 private:
  std::vector<double> sorted_;
};

struct DimensionEstimate {
  double dimension = 0.0;
  std::vector<double> r_values;
  std::vector<double> c_values;
  std::vector<double> log_c_values;  ///< NaN where C(r) = 0
  std::vector<double> slopes;        ///< finite consecutive slopes kept for the mean
};

/// Mean of the finite slopes of ln C(r) against ln r over `steps`
/// log-spaced radii in [r0, rmax]. Steps where C(r) is 0 are skipped.
/// Throws ParameterError for bad arguments, NumericError when no slope survives.
DimensionEstimate intrinsic_dimension(const std::vector<Point>& points, double r0, double rmax,
                                      std::size_t steps);

/// Radius range as quantiles of the pairwise distances. The upper end stays
/// well below saturation (C(r) -> 1), where slopes flatten toward zero.
struct DimensionGrid {
  double low_quantile = 0.01;
  double high_quantile = 0.30;
  std::size_t steps = 20;
};

/// Radii taken from quantiles of the observed pairwise distances; rmax is
/// moved to the next observed distance above the high quantile.
DimensionEstimate intrinsic_dimension(const std::vector<Point>& points,
                                      const DimensionGrid& grid = {});

std::string to_json(const DimensionEstimate& estimate);
/// "r,C" table.
std::string to_csv(const DimensionEstimate& estimate);

}  // namespace confperf

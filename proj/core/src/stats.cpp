#include "confperf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"

#include "confperf/error.hpp"
#include "confperf/rng.hpp"

namespace confperf {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double a12(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw ParameterError("a12 needs two non-empty lists");
  double wins = 0.0;
  for (double x : xs) {
    for (double y : ys) {
      if (x > y) {
        wins += 1.0;
      } else if (x == y) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

bool bootstrap_significant(std::span<const double> xs, std::span<const double> ys,
                           const BootstrapParams& params) {
  if (xs.empty() || ys.empty()) throw ParameterError("bootstrap needs two non-empty lists");
  if (params.iterations < 100) throw ParameterError("bootstrap needs at least 100 iterations");
  if (!(params.confidence > 0.0 && params.confidence < 1.0)) {
    throw ParameterError("bootstrap confidence must lie in (0, 1)");
  }

  std::vector<double> pooled(xs.begin(), xs.end());
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const double observed = std::abs(mean(xs) - mean(ys));
  double scale = 0.0;
  for (double v : pooled) scale = std::max(scale, std::abs(v));
  const double slack = 1e-12 * scale;

  Rng rng(params.seed);
  std::size_t as_extreme = 0;
  for (std::size_t it = 0; it < params.iterations; ++it) {
    double sx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) sx += pooled[rng.uniform_index(pooled.size())];
    double sy = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) sy += pooled[rng.uniform_index(pooled.size())];
    const double diff = std::abs(sx / static_cast<double>(xs.size()) - sy / static_cast<double>(ys.size()));
    if (diff >= observed - slack) ++as_extreme;
  }
  const double p = static_cast<double>(as_extreme) / static_cast<double>(params.iterations);
  return p < 1.0 - params.confidence;
}

namespace {

struct SortedGroup {
  std::string name;
  std::vector<double> values;
  double mean = 0.0;
  std::size_t input_order = 0;
};

class ScottKnott {
 public:
  ScottKnott(std::vector<SortedGroup> groups, const ScottKnottParams& params)
      : groups_(std::move(groups)), params_(params), ranks_(groups_.size(), 0) {}

  std::vector<int> run() {
    divide(0, groups_.size());
    return ranks_;
  }

 private:
  std::vector<double> values(std::size_t lo, std::size_t hi) const {
    std::vector<double> out;
    for (std::size_t g = lo; g < hi; ++g) out.insert(out.end(), groups_[g].values.begin(), groups_[g].values.end());
    return out;
  }

  // Cut index maximizing the between-group sum of squares of [lo, cut) vs [cut, hi).
  std::size_t best_cut(std::size_t lo, std::size_t hi) const {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t g = lo; g < hi; ++g) {
      for (double v : groups_[g].values) total += v;
      count += groups_[g].values.size();
    }
    const double mu = total / static_cast<double>(count);
    std::size_t cut = lo + 1;
    double best = -1.0;
    double left_sum = 0.0;
    std::size_t left_n = 0;
    for (std::size_t c = lo + 1; c < hi; ++c) {
      for (double v : groups_[c - 1].values) left_sum += v;
      left_n += groups_[c - 1].values.size();
      const double right_n = static_cast<double>(count - left_n);
      const double ml = left_sum / static_cast<double>(left_n);
      const double mr = (total - left_sum) / right_n;
      const double ss = static_cast<double>(left_n) * (ml - mu) * (ml - mu) + right_n * (mr - mu) * (mr - mu);
      if (ss > best) {
        best = ss;
        cut = c;
      }
    }
    return cut;
  }

  void divide(std::size_t lo, std::size_t hi) {
    if (hi - lo >= 2) {
      const auto cut = best_cut(lo, hi);
      const auto left = values(lo, cut);
      const auto right = values(cut, hi);
      auto boot = params_.bootstrap;
      boot.seed = derive_seed(derive_seed(params_.bootstrap.seed, lo), hi);
      const double effect = std::max(a12(left, right), a12(right, left));
      if (effect >= params_.small_effect && bootstrap_significant(left, right, boot)) {
        divide(lo, cut);
        divide(cut, hi);
        return;
      }
    }
    ++next_rank_;
    for (std::size_t g = lo; g < hi; ++g) ranks_[g] = next_rank_;
  }

  std::vector<SortedGroup> groups_;
  const ScottKnottParams& params_;
  std::vector<int> ranks_;
  int next_rank_ = 0;
};

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

RankTable scott_knott(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                      const ScottKnottParams& params) {
  if (groups.empty()) throw ParameterError("scott_knott needs at least one group");
  std::vector<SortedGroup> sorted;
  sorted.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& [name, vals] = groups[i];
    if (vals.empty()) throw ParameterError("group '" + name + "' is empty");
    sorted.push_back({name, vals, mean(vals), i});
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SortedGroup& a, const SortedGroup& b) { return a.mean < b.mean; });

  const auto ranks = ScottKnott(sorted, params).run();
  RankTable table;
  for (std::size_t g = 0; g < sorted.size(); ++g) {
    table.entries.push_back({sorted[g].name, ranks[g], sorted[g].mean, sample_stddev(sorted[g].values), 0.0,
                             sorted[g].values.size()});
  }
  return table;
}

std::string to_json(const RankTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : table.entries) {
    rows.push_back({{"name", e.name},
                    {"rank", e.rank},
                    {"mean", e.mean},
                    {"stddev", e.stddev},
                    {"evaluations", e.evaluations},
                    {"n", e.n}});
  }
  return nlohmann::json{{"entries", rows}}.dump(2);
}

std::string to_text(const RankTable& table) {
  std::size_t width = 6;
  for (const auto& e : table.entries) width = std::max(width, e.name.size());
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-4s  %-*s  %10s  %10s  %11s  %4s\n", "rank", static_cast<int>(width),
                "method", "mean", "stddev", "evaluations", "n");
  out += line;
  for (const auto& e : table.entries) {
    std::snprintf(line, sizeof line, "%-4d  %-*s  %10s  %10s  %11s  %4zu\n", e.rank, static_cast<int>(width),
                  e.name.c_str(), format_double(e.mean, 2).c_str(), format_double(e.stddev, 2).c_str(),
                  format_double(e.evaluations, 1).c_str(), e.n);
    out += line;
  }
  return out;
}

}  // namespace confperf

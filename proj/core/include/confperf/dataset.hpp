#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace confperf {

/// One assignment of true/false to every Boolean option of a system.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<std::uint8_t> bits);
  Configuration(std::initializer_list<int> bits);

  /// Parses a string of '0'/'1' characters, e.g. "0110".
  static Configuration from_string(std::string_view bits);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t popcount() const noexcept;
  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// A configuration together with its measured performance.
///
/// `id` is the row's position in the dataset it was loaded into and stays
/// attached to the row through shuffles, splits and clustering, so sampled
/// rows can always be traced back to the source table.
struct MeasuredConfig {
  Configuration config;
  double performance = 0.0;
  std::size_t id = 0;

  friend bool operator==(const MeasuredConfig&, const MeasuredConfig&) = default;
};

/// Feature names plus measured rows. Immutable once built.
class ConfigDataset {
 public:
  ConfigDataset() = default;

  /// Validates and builds a dataset. Rows whose configuration repeats an
  /// earlier row are dropped (first occurrence wins) and counted in
  /// collapsed_duplicates(), which starts from `prior_duplicates`. Row ids
  /// are kept as given.
  ConfigDataset(std::string name, std::vector<std::string> feature_names,
                std::vector<MeasuredConfig> rows, std::size_t prior_duplicates = 0);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<MeasuredConfig>& rows() const noexcept { return rows_; }
  std::size_t arity() const noexcept { return feature_names_.size(); }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  std::size_t collapsed_duplicates() const noexcept { return collapsed_duplicates_; }

  /// Same rows and features; ignores name and duplicate bookkeeping.
  friend bool operator==(const ConfigDataset& a, const ConfigDataset& b) {
    return a.feature_names_ == b.feature_names_ && a.rows_ == b.rows_;
  }

 private:
  std::string name_;
  std::vector<std::string> feature_names_;
  std::vector<MeasuredConfig> rows_;
  std::size_t collapsed_duplicates_ = 0;
};

struct CsvOptions {
  /// When non-empty, the header's final column must carry this name.
  std::string performance_column;
};

/// Loads a measured-configuration table: header row of feature names, one
/// row per configuration with 0/1 feature cells and a final performance
/// column. Row ids are assigned 0..n-1 after duplicate collapsing.
///
/// Throws DataError for a missing file, ragged rows, non-binary cells,
/// non-finite or non-positive performance, or an empty table.
ConfigDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Parses CSV text; `name` labels the resulting dataset.
ConfigDataset parse_csv(std::string_view text, std::string name, const CsvOptions& options = {});

/// Writes the dataset as CSV with `performance_column` as the last header.
std::string to_csv(const ConfigDataset& dataset,
                   std::string_view performance_column = "performance");

/// JSON export: {"name", "feature_names", "rows": [{"id", "config", "performance"}]}.
std::string to_json(const ConfigDataset& dataset);

struct SplitPair {
  ConfigDataset train;
  ConfigDataset test;
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Number of training rows for `fraction` of `n` rows: floor(fraction * n).
std::size_t train_size(double fraction, std::size_t n);

/// Shuffles the rows with `seed` and puts the first floor(fraction * N) of
/// them in train, the rest in test. Throws ParameterError unless
/// 0 < fraction < 1 and the dataset is non-empty.
SplitPair shuffle_split(const ConfigDataset& dataset, double fraction, std::uint64_t seed);

}  // namespace confperf

#include "confperf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "confperf/error.hpp"
#include "confperf/rng.hpp"

namespace confperf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

struct ConfigHash {
  std::size_t operator()(const Configuration& c) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto b : c.bits()) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

std::string row_error(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

Configuration::Configuration(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw DataError("configuration bits must be 0 or 1");
  }
}

Configuration::Configuration(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw DataError("configuration bits must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

Configuration Configuration::from_string(std::string_view bits) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw DataError("configuration string must contain only 0/1");
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Configuration(std::move(out));
}

std::size_t Configuration::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string Configuration::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

ConfigDataset::ConfigDataset(std::string name, std::vector<std::string> feature_names,
                             std::vector<MeasuredConfig> rows, std::size_t prior_duplicates)
    : name_(std::move(name)),
      feature_names_(std::move(feature_names)),
      collapsed_duplicates_(prior_duplicates) {
  std::set<std::string_view> seen_names;
  for (const auto& f : feature_names_) {
    if (f.empty()) throw DataError("empty feature name");
    if (!seen_names.insert(f).second) throw DataError("duplicate feature name '" + f + "'");
  }
  std::unordered_set<Configuration, ConfigHash> seen;
  rows_.reserve(rows.size());
  for (auto& row : rows) {
    if (row.config.size() != feature_names_.size()) {
      throw DataError("row " + std::to_string(row.id) + " has arity " +
                      std::to_string(row.config.size()) + ", expected " +
                      std::to_string(feature_names_.size()));
    }
    if (!std::isfinite(row.performance)) {
      throw DataError("row " + std::to_string(row.id) + ": non-finite performance");
    }
    if (row.performance <= 0.0) {
      throw DataError("row " + std::to_string(row.id) + ": non-positive performance");
    }
    if (!seen.insert(row.config).second) {
      ++collapsed_duplicates_;
      continue;
    }
    rows_.push_back(std::move(row));
  }
}

ConfigDataset parse_csv(std::string_view text, std::string name, const CsvOptions& options) {
  std::vector<std::string> header;
  std::vector<MeasuredConfig> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto cells = split_cells(line);
    if (header.empty()) {
      if (cells.size() < 2) {
        throw DataError(row_error(line_no, "header needs at least one feature and a performance column"));
      }
      for (auto c : cells) header.emplace_back(c);
      if (!options.performance_column.empty() && header.back() != options.performance_column) {
        throw DataError(row_error(line_no, "last column is '" + header.back() + "', expected '" +
                                               options.performance_column + "'"));
      }
      continue;
    }
    if (cells.size() != header.size()) {
      throw DataError(row_error(line_no, "ragged row: " + std::to_string(cells.size()) +
                                             " cells, header has " + std::to_string(header.size())));
    }
    std::vector<std::uint8_t> bits(cells.size() - 1);
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      if (cells[i] == "0") {
        bits[i] = 0;
      } else if (cells[i] == "1") {
        bits[i] = 1;
      } else {
        throw DataError(row_error(line_no, "non-binary feature cell '" + std::string(cells[i]) +
                                               "' in column '" + header[i] + "'"));
      }
    }
    const auto perf_cell = cells.back();
    double perf = 0.0;
    const auto [end, ec] = std::from_chars(perf_cell.data(), perf_cell.data() + perf_cell.size(), perf);
    if (ec != std::errc{} || end != perf_cell.data() + perf_cell.size()) {
      throw DataError(row_error(line_no, "malformed performance '" + std::string(perf_cell) + "'"));
    }
    if (!std::isfinite(perf)) throw DataError(row_error(line_no, "non-finite performance"));
    if (perf <= 0.0) throw DataError(row_error(line_no, "non-positive performance"));
    rows.push_back(MeasuredConfig{Configuration(std::move(bits)), perf, rows.size()});
  }
  if (header.empty()) throw DataError("empty dataset: no header row");
  if (rows.empty()) throw DataError("empty dataset: no data rows");

  header.pop_back();
  // Collapse here so ids can be renumbered as positions in the kept table.
  std::unordered_set<Configuration, ConfigHash> seen;
  std::vector<MeasuredConfig> kept;
  kept.reserve(rows.size());
  for (auto& row : rows) {
    if (!seen.insert(row.config).second) continue;
    row.id = kept.size();
    kept.push_back(std::move(row));
  }
  const auto duplicates = rows.size() - kept.size();
  return ConfigDataset(std::move(name), std::move(header), std::move(kept), duplicates);
}

ConfigDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path.stem().string(), options);
}

std::string to_csv(const ConfigDataset& dataset, std::string_view performance_column) {
  std::string out;
  for (const auto& f : dataset.feature_names()) {
    out += f;
    out += ',';
  }
  out += performance_column;
  out += '\n';
  char buf[64];
  for (const auto& row : dataset.rows()) {
    for (auto b : row.config.bits()) {
      out += b ? '1' : '0';
      out += ',';
    }
    // Shortest representation that round-trips exactly.
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, row.performance);
    out.append(buf, end);
    out += '\n';
  }
  return out;
}

std::string to_json(const ConfigDataset& dataset) {
  nlohmann::json j;
  j["name"] = dataset.name();
  j["feature_names"] = dataset.feature_names();
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& row : dataset.rows()) {
    rows.push_back({{"id", row.id}, {"config", row.config.to_string()}, {"performance", row.performance}});
  }
  return j.dump(2);
}

std::size_t train_size(double fraction, std::size_t n) {
  // The epsilon keeps products such as 0.29 * 100 = 28.999999999999996
  // from losing a row to binary rounding.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

SplitPair shuffle_split(const ConfigDataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ParameterError("split fraction must lie in (0, 1), got " + std::to_string(fraction));
  }
  if (dataset.empty()) throw ParameterError("cannot split an empty dataset");

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }

  const auto n_train = train_size(fraction, dataset.size());
  std::vector<MeasuredConfig> train, test;
  train.reserve(n_train);
  test.reserve(dataset.size() - n_train);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? train : test).push_back(dataset.rows()[order[i]]);
  }
  return SplitPair{ConfigDataset(dataset.name(), dataset.feature_names(), std::move(train)),
                   ConfigDataset(dataset.name(), dataset.feature_names(), std::move(test)), fraction,
                   seed};
}

}  // namespace confperf

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "confperf/cart.hpp"
#include "confperf/dataset.hpp"
#include "confperf/error.hpp"
#include "confperf/intrinsic.hpp"
#include "confperf/optimize.hpp"
#include "confperf/rig.hpp"
#include "confperf/rng.hpp"
#include "confperf/sampling.hpp"
#include "confperf/spectral.hpp"
#include "confperf/stats.hpp"
#include "confperf/synthetic.hpp"

#ifndef CONFPERF_VERSION
#define CONFPERF_VERSION "0.0.0"
#endif

namespace confperf::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

// FNV-1a 64, printed as 16 hex digits.
std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json meta(std::string_view command, std::optional<std::uint64_t> seed, const json& inputs) {
  json m{{"tool", "confperf"}, {"version", CONFPERF_VERSION}, {"command", command}, {"inputs", inputs}};
  m["seed"] = seed ? json(*seed) : json(nullptr);
  return m;
}

struct LoadedData {
  ConfigDataset dataset;
  json input;
};

LoadedData load_data(const std::string& path, const std::string& perf_column, std::ostream& err) {
  const auto text = read_file(path);
  auto dataset = parse_csv(text, fs::path(path).stem().string(), CsvOptions{perf_column});
  if (dataset.collapsed_duplicates() > 0) {
    err << "warning: " << path << ": collapsed " << dataset.collapsed_duplicates()
        << " duplicate configuration(s), keeping the first\n";
  }
  json input{{"path", path}, {"digest", digest(text)}, {"rows", dataset.size()},
             {"features", dataset.arity()}, {"collapsed_duplicates", dataset.collapsed_duplicates()}};
  return {std::move(dataset), std::move(input)};
}

void emit(std::ostream& out, const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
}

std::vector<double> parse_numbers(std::string_view text, const std::string& source) {
  std::vector<double> values;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ';'; };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    const auto token = text.substr(pos, end - pos);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw DataError(source + ": malformed number '" + std::string(token) + "'");
    }
    values.push_back(v);
    pos = end;
  }
  if (values.empty()) throw DataError(source + ": no values");
  return values;
}

// Options shared by the commands that turn a dataset into samples.
struct PolicyOptions {
  std::string policy = "s1";
  double threshold = 1.0;
  std::size_t k = 16;
  std::size_t rounds = 2;

  void add_to(CLI::App& app) {
    app.add_option("--policy", policy, "s1, s2, s3, random, progressive or full")->capture_default_str();
    app.add_option("--threshold", threshold, "Leaf threshold multiplier on sqrt(N)")->capture_default_str();
    app.add_option("--k", k, "Sample size for the random policy")->capture_default_str();
    app.add_option("--rounds", rounds, "Rounds for the progressive policy")->capture_default_str();
  }

  PolicySpec spec() const { return {parse_policy(policy), threshold, k, rounds}; }

  json describe() const {
    return {{"policy", policy}, {"threshold", threshold}, {"k", k}, {"rounds", rounds}};
  }
};

struct CartOptions {
  std::size_t min_split = 4;
  std::size_t min_leaf = 1;
  std::optional<std::size_t> max_depth;

  void add_to(CLI::App& app) {
    app.add_option("--min-split", min_split, "CART minimum samples to split")->capture_default_str();
    app.add_option("--min-leaf", min_leaf, "CART minimum samples per leaf")->capture_default_str();
    app.add_option("--max-depth", max_depth, "CART depth cap");
  }

  CartParams params() const { return {min_split, min_leaf, max_depth}; }

  json describe() const {
    return {{"min_split", min_split}, {"min_leaf", min_leaf},
            {"max_depth", max_depth ? json(*max_depth) : json(nullptr)}};
  }
};

std::vector<double> parse_fraction_list(const std::string& text) {
  std::vector<double> out;
  for (double v : parse_numbers(text, "--fractions")) out.push_back(v > 1.0 ? v / 100.0 : v);
  return out;
}

void check_format(const std::string& format) {
  if (format != "json" && format != "text") throw UsageError("--format must be json or text");
}

// ---------------------------------------------------------------- rig

struct RigCommand {
  std::string data, perf_column, fractions = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  std::string format = "json", out_path, curve_csv;
  std::size_t repeats = 20;
  std::uint64_t seed = 1;
  double elbow_tol = 1.0;
  PolicyOptions policy;
  CartOptions cart;

  void attach(CLI::App& parent, std::function<void()>& action) {
    auto* app = parent.add_subcommand("rig", "Repeated train-fraction experiment");
    app->add_option("--data", data, "Measured configuration table (CSV)")->required();
    app->add_option("--perf-column", perf_column, "Require this name on the performance column");
    app->add_option("--fractions", fractions, "Comma-separated train fractions (0.4 or 40)")->capture_default_str();
    app->add_option("--repeats", repeats, "Repeats per fraction")->capture_default_str();
    app->add_option("--seed", seed, "Base seed")->capture_default_str();
    app->add_option("--elbow-tol", elbow_tol, "MRE points within the best mean that count as plateau")
        ->capture_default_str();
    app->add_option("--format", format, "json or text")->capture_default_str();
    app->add_option("--out", out_path, "Write the report here instead of stdout");
    app->add_option("--curve-csv", curve_csv, "Also write the (X, mean, std) curve as CSV");
    policy.add_to(*app);
    cart.add_to(*app);
    app->callback([this, &action] { action = [this] { run(); }; });
  }

  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void run() {
    check_format(format);
    auto loaded = load_data(data, perf_column, *err);
    RigParams params;
    params.policy = policy.spec();
    params.cart = cart.params();
    params.fractions = parse_fraction_list(fractions);
    params.repeats = repeats;
    params.base_seed = seed;
    params.elbow_tolerance = elbow_tol;
    const auto report = run_rig(loaded.dataset, params);

    std::string text;
    if (format == "json") {
      json j = json::parse(to_json(report));
      j["meta"] = meta("rig", seed, json::array({loaded.input}));
      j["meta"]["policy"] = policy.describe();
      j["meta"]["cart"] = cart.describe();
      text = j.dump(2) + "\n";
    } else {
      text = "# confperf " CONFPERF_VERSION " rig seed=" + std::to_string(seed) + " digest=" +
             loaded.input["digest"].get<std::string>() + "\n" + to_text(report);
    }
    emit(*out, text, out_path);
    if (!curve_csv.empty()) write_file(curve_csv, to_csv(report));
  }
};

// ---------------------------------------------------------------- rank

struct RankCommand {
  std::vector<std::string> files;
  std::uint64_t seed = 0;
  std::size_t iterations = 1000;
  double confidence = 0.95;
  std::string format = "json", out_path;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void attach(CLI::App& parent, std::function<void()>& action) {
    auto* app = parent.add_subcommand("rank", "Scott-Knott ranking of per-repeat MRE samples");
    app->add_option("files", files, "One file of numbers per method; use name=path to label it")->required();
    app->add_option("--seed", seed, "Bootstrap seed")->capture_default_str();
    app->add_option("--iterations", iterations, "Bootstrap iterations")->capture_default_str();
    app->add_option("--confidence", confidence, "Bootstrap confidence")->capture_default_str();
    app->add_option("--format", format, "json or text")->capture_default_str();
    app->add_option("--out", out_path, "Write the table here instead of stdout");
    app->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    check_format(format);
    std::vector<std::pair<std::string, std::vector<double>>> groups;
    json inputs = json::array();
    for (const auto& spec : files) {
      std::string name, path = spec;
      if (const auto eq = spec.find('='); eq != std::string::npos) {
        name = spec.substr(0, eq);
        path = spec.substr(eq + 1);
      } else {
        name = fs::path(spec).stem().string();
      }
      const auto text = read_file(path);
      groups.emplace_back(name, parse_numbers(text, path));
      inputs.push_back({{"name", name}, {"path", path}, {"digest", digest(text)}});
    }
    ScottKnottParams params;
    params.bootstrap = {iterations, confidence, seed};
    const auto table = scott_knott(groups, params);

    std::string text;
    if (format == "json") {
      json j = json::parse(to_json(table));
      j["meta"] = meta("rank", seed, inputs);
      text = j.dump(2) + "\n";
    } else {
      text = to_text(table);
    }
    emit(*out, text, out_path);
  }
};

// ---------------------------------------------------------------- train

struct TrainCommand {
  std::string data, perf_column, out_path;
  double fraction = 0.4;
  std::uint64_t seed = 1;
  PolicyOptions policy;
  CartOptions cart;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void attach(CLI::App& parent, std::function<void()>& action) {
    auto* app = parent.add_subcommand("train", "Sample a training split and fit a CART surrogate");
    app->add_option("--data", data, "Measured configuration table (CSV)")->required();
    app->add_option("--perf-column", perf_column, "Require this name on the performance column");
    app->add_option("--fraction", fraction, "Share of rows studied for sampling")->capture_default_str();
    app->add_option("--seed", seed, "Seed for split, clustering and sampling")->capture_default_str();
    app->add_option("--out", out_path, "Model file to write (stdout when omitted)");
    policy.add_to(*app);
    cart.add_to(*app);
    app->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    auto loaded = load_data(data, perf_column, *err);
    const auto split = shuffle_split(loaded.dataset, fraction, seed);
    const auto plan = run_policy(split.train, policy.spec(), derive_seed(seed, 1000));
    const auto model = fit(plan.chosen, cart.params());

    json j;
    j["meta"] = meta("train", seed, json::array({loaded.input}));
    j["meta"]["policy"] = policy.describe();
    j["meta"]["cart"] = cart.describe();
    j["fraction"] = fraction;
    j["feature_names"] = loaded.dataset.feature_names();
    j["arity"] = model.arity();
    j["train_rows"] = split.train.size();
    j["test_rows"] = split.test.size();
    j["evaluations"] = plan.evaluations;
    j["sampled_ids"] = json::parse(to_json(plan))["row_ids"];
    j["test_mre"] = mean_mre(model, split.test.rows());
    j["tree"] = json::parse(to_json(model));
    emit(*out, j.dump(2) + "\n", out_path);
  }
};

// ---------------------------------------------------------------- optimize

struct OptimizeCommand {
  std::string model_path, validity_path, out_path;
  std::optional<std::size_t> arity;
  DeParams de;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void attach(CLI::App& parent, std::function<void()>& action) {
    auto* app = parent.add_subcommand("optimize", "Differential evolution against a CART surrogate");
    app->add_option("--model", model_path, "Model written by `train`, or a bare tree JSON")->required();
    app->add_option("--arity", arity, "Number of options (checked against the model)");
    app->add_option("--validity", validity_path, "JSON conjunction of {\"bit\", \"value\"} clauses");
    app->add_option("--population", de.population, "DE population")->capture_default_str();
    app->add_option("--generations", de.generations, "DE generations")->capture_default_str();
    app->add_option("--cr", de.crossover_rate, "DE crossover rate")->capture_default_str();
    app->add_option("--f", de.differential_weight, "DE differential weight")->capture_default_str();
    app->add_option("--max-init", de.max_init_attempts, "Random draws allowed to seed the population")
        ->capture_default_str();
    app->add_option("--seed", de.seed, "DE seed")->capture_default_str();
    app->add_option("--out", out_path, "Write the result here instead of stdout");
    app->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto text = read_file(model_path);
    json model_json;
    try {
      model_json = json::parse(text);
    } catch (const json::exception& e) {
      throw DataError("malformed model JSON: " + std::string(e.what()));
    }
    const auto& tree_json = model_json.contains("tree") ? model_json["tree"] : model_json;
    const auto tree = tree_from_json(tree_json.dump());
    const std::size_t n = arity.value_or(tree.arity());

    json inputs = json::array({{{"path", model_path}, {"digest", digest(text)}}});
    ValidityPredicate validity = always_valid;
    if (!validity_path.empty()) {
      const auto vtext = read_file(validity_path);
      auto clauses = validity_from_json(vtext);
      for (const auto& c : clauses.clauses) {
        if (c.bit >= n) throw DataError("validity clause names bit " + std::to_string(c.bit) + " beyond arity");
      }
      validity = clauses;
      inputs.push_back({{"path", validity_path}, {"digest", digest(vtext)}});
    }

    const auto result = de_optimize(tree, n, validity, de);
    json j = json::parse(to_json(result));
    j["meta"] = meta("optimize", de.seed, inputs);
    j["meta"]["de"] = {{"population", de.population}, {"generations", de.generations},
                       {"cr", de.crossover_rate}, {"f", de.differential_weight}};
    if (model_json.contains("feature_names")) {
      json enabled = json::array();
      const auto names = model_json["feature_names"].get<std::vector<std::string>>();
      for (std::size_t i = 0; i < names.size() && i < result.best_config.size(); ++i) {
        if (result.best_config[i]) enabled.push_back(names[i]);
      }
      j["enabled_features"] = enabled;
    }
    emit(*out, j.dump(2) + "\n", out_path);
  }
};

// ---------------------------------------------------------------- sample

struct SampleCommand {
  std::string data, perf_column, format = "json", out_path;
  std::optional<double> fraction;
  std::uint64_t seed = 1;
  PolicyOptions policy;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void attach(CLI::App& parent, std::function<void()>& action) {
    auto* app = parent.add_subcommand("sample", "Cluster a table and pick rows to measure");
    app->add_option("--data", data, "Measured configuration table (CSV)")->required();
    app->add_option("--perf-column", perf_column, "Require this name on the performance column");
    app->add_option("--fraction", fraction, "Sample from this training share only (whole table when omitted)");
    app->add_option("--seed", seed, "Seed")->capture_default_str();
    app->add_option("--format", format, "json or text")->capture_default_str();
    app->add_option("--out", out_path, "Write the plan here instead of stdout");
    policy.add_to(*app);
    app->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    check_format(format);
    auto loaded = load_data(data, perf_column, *err);
    ConfigDataset pool = loaded.dataset;
    if (fraction) pool = shuffle_split(loaded.dataset, *fraction, seed).train;
    const auto plan = run_policy(pool, policy.spec(), derive_seed(seed, 1000));

    std::string text;
    if (format == "json") {
      json j = json::parse(to_json(plan));
      j["meta"] = meta("sample", seed, json::array({loaded.input}));
      j["meta"]["policy"] = policy.describe();
      j["pool_rows"] = pool.size();
      text = j.dump(2) + "\n";
    } else {
      text = "policy " + std::string(to_string(plan.policy)) + "\nevaluations " + std::to_string(plan.evaluations) +
             "\nrow_ids";
      for (const auto& row : plan.chosen) text += " " + std::to_string(row.id);
      text += "\n";
    }
    emit(*out, text, out_path);
  }
};

// ---------------------------------------------------------------- dim

struct DimCommand {
  std::string data, perf_column, format = "json", out_path, csv_path;
  std::optional<double> r0, rmax;
  DimensionGrid grid;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void attach(CLI::App& parent, std::function<void()>& action) {
    auto* app = parent.add_subcommand("dim", "Correlation dimension of the configuration set");
    app->add_option("--data", data, "Measured configuration table (CSV)")->required();
    app->add_option("--perf-column", perf_column, "Require this name on the performance column");
    app->add_option("--steps", grid.steps, "Radii on the log grid")->capture_default_str();
    app->add_option("--r0", r0, "Smallest radius (default: low quantile of pair distances)");
    app->add_option("--rmax", rmax, "Largest radius (default: high quantile of pair distances)");
    app->add_option("--low-quantile", grid.low_quantile, "Quantile used for r0")->capture_default_str();
    app->add_option("--high-quantile", grid.high_quantile, "Quantile used for rmax")->capture_default_str();
    app->add_option("--format", format, "json, or text for the (r, C) CSV")->capture_default_str();
    app->add_option("--out", out_path, "Write the result here instead of stdout");
    app->add_option("--csv", csv_path, "Also write the (r, C) table as CSV");
    app->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    check_format(format);
    if (r0.has_value() != rmax.has_value()) throw UsageError("--r0 and --rmax go together");
    auto loaded = load_data(data, perf_column, *err);
    std::vector<Configuration> configs;
    for (const auto& row : loaded.dataset.rows()) configs.push_back(row.config);
    const auto points = to_points(configs);
    const auto estimate = r0 ? intrinsic_dimension(points, *r0, *rmax, grid.steps) : intrinsic_dimension(points, grid);

    std::string text;
    if (format == "json") {
      json j = json::parse(to_json(estimate));
      j["meta"] = meta("dim", std::nullopt, json::array({loaded.input}));
      j["ambient_dimension"] = loaded.dataset.arity();
      text = j.dump(2) + "\n";
    } else {
      char line[64];
      std::snprintf(line, sizeof line, "# dimension %.6f\n", estimate.dimension);
      text = line + to_csv(estimate);
    }
    emit(*out, text, out_path);
    if (!csv_path.empty()) write_file(csv_path, to_csv(estimate));
  }
};

// ---------------------------------------------------------------- synth

struct SynthCommand {
  AdditiveSpace space;
  std::string out_path;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void attach(CLI::App& parent, std::function<void()>& action) {
    auto* app = parent.add_subcommand("synth", "Write a synthetic additive configuration table");
    app->add_option("--features", space.features, "Boolean options (table has 2^features rows)")
        ->capture_default_str();
    app->add_option("--base", space.base, "Performance with every option off")->capture_default_str();
    app->add_option("--weight-scale", space.weight_scale, "Contribution of option 0; option i adds scale/2^i")
        ->capture_default_str();
    app->add_option("--noise", space.noise, "Std-dev of the multiplicative noise")->capture_default_str();
    app->add_option("--seed", space.seed, "Noise seed")->capture_default_str();
    app->add_option("--out", out_path, "CSV path (stdout when omitted)");
    app->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() { emit(*out, to_csv(additive_dataset(space)), out_path); }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"confperf: spectral sampling and performance prediction for configurable systems", "confperf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CONFPERF_VERSION);

  std::function<void()> action;
  RigCommand rig;
  RankCommand rank;
  TrainCommand train;
  OptimizeCommand optimize;
  SampleCommand sample;
  DimCommand dim;
  SynthCommand synth;
  rig.out = rank.out = train.out = optimize.out = sample.out = dim.out = synth.out = &out;
  rig.err = rank.err = train.err = optimize.err = sample.err = dim.err = synth.err = &err;
  rig.attach(app, action);
  rank.attach(app, action);
  train.attach(app, action);
  optimize.attach(app, action);
  sample.attach(app, action);
  dim.attach(app, action);
  synth.attach(app, action);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << CONFPERF_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (action) action();
    return kOk;
  } catch (const UsageError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "error: data: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "error: runtime: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace confperf::cli

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "featshift/csv.hpp"
#include "featshift/error.hpp"
#include "featshift/experiments.hpp"
#include "featshift/report_io.hpp"
#include "featshift/scenario.hpp"
#include "featshift/stream.hpp"

namespace fs = std::filesystem;
using namespace featshift;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

// Every option registers a JSON getter so the resolved configuration can be
// printed before any work starts and fed back through --config.
struct Registry {
  std::vector<std::pair<std::string, std::function<Json()>>> entries;

  template <class T>
  CLI::Option* option(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    entries.emplace_back(name, [&var] { return Json(var); });
    return app->add_option("--" + name, var, help);
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& help) {
    entries.emplace_back(name, [&var] { return Json(var); });
    return app->add_flag("--" + name, var, help);
  }

  Json resolved() const {
    Json j = Json::object();
    for (const auto& [name, get] : entries) j[name] = get();
    return j;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    std::istringstream is(item);
    T value{};
    if (!(is >> value) || !is.eof()) throw ConfigError(std::string("bad ") + what + " entry '" + item + "'");
    out.push_back(value);
  }
  return out;
}

template <class T, class Parse>
std::vector<T> parse_names(const std::string& text, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse(item));
  return out;
}

IndexList parse_indices(const std::string& text) { return parse_list<std::size_t>(text, "index"); }

PooledScheme parse_scheme(const std::string& name) {
  if (name == "with-replacement") return PooledScheme::WithReplacement;
  if (name == "permutation-split") return PooledScheme::PermutationSplit;
  throw ConfigError("unknown pooled scheme '" + name + "'");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

// ---------------------------------------------------------------- options

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

struct EstimatorFlags {
  std::string method = "mb-sm";
  std::string density = "gaussian";
  std::size_t knn_k = 0;
  std::size_t n_samp = 1000;
  std::size_t eval_per_side = 30;
  std::size_t flow_layers = 2;
  std::size_t flow_bins = 100;
  double ridge = 0.0;

  EstimatorConfig resolve() const {
    EstimatorConfig cfg;
    cfg.method = parse_method(method);
    cfg.density.kind = parse_density_kind(density);
    cfg.density.ridge = ridge;
    cfg.density.flow.layers = flow_layers;
    cfg.density.flow.bins = flow_bins;
    cfg.knn_k = knn_k;
    cfg.n_samp = n_samp;
    cfg.m_per_side = eval_per_side;
    return cfg;
  }
};

void add_common(Registry& reg, CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON file of option values; command-line flags take precedence");
  reg.option(app, "seed", c.seed, "Base seed");
  reg.option(app, "out", c.out, "Output path");
}

void add_estimator(Registry& reg, CLI::App* app, EstimatorFlags& e, bool method_list = false) {
  if (!method_list) {
    reg.option(app, "method", e.method, "mb-sm | mb-ks | knn-ks | marginal-ks");
  }
  reg.option(app, "density", e.density, "Density model for mb-sm: gaussian | flow");
  reg.option(app, "knn-k", e.knn_k, "Neighbours for knn-ks (0: ceil(sqrt(n)))");
  reg.option(app, "n-samp", e.n_samp, "Conditional draws per side for mb-ks");
  reg.option(app, "eval-per-side", e.eval_per_side, "Evaluation rows drawn from each sample");
  reg.option(app, "flow-layers", e.flow_layers, "Gaussianization layers");
  reg.option(app, "flow-bins", e.flow_bins, "Histogram bins per flow layer");
  reg.option(app, "ridge", e.ridge, "Diagonal ridge for Gaussian fits");
}

struct SimulateOpts {
  Common common;
  std::string graph = "complete";
  std::size_t d = 25;
  std::size_t n = 1000;
  double mi = 0.2;
  double edge_prob = 0.1;
  std::size_t attack_count = 1;
  std::string attacked;
  std::size_t length = 0;
  double onset_fraction = 0.8;
};

struct DetectOpts {
  Common common;
  EstimatorFlags est;
  std::string reference;
  std::string query;
  std::string clean;
  double alpha = 0.05;
  std::size_t boot_b = 50;
  std::string bootstrap = "pooled";
  std::string pooled_scheme = "with-replacement";
  std::size_t budget_k = 1;
  bool no_bonferroni = false;
};

struct StreamOpts {
  Common common;
  EstimatorFlags est;
  std::string input;
  std::string truth;
  std::size_t clean_len = 0;
  std::size_t window = 400;
  std::size_t step = 50;
  std::size_t budget_k = 3;
  double alpha = 0.05;
  std::string bootstrap = "time";
  std::size_t boot_b = 500;
  std::string pooled_scheme = "with-replacement";
  bool difference = false;
  bool power_transform = false;
  bool standardize = false;
  bool fit_on_full = false;
  bool recompute_thresholds = false;
};

struct ExperimentOpts {
  Common common;
  EstimatorFlags est;
  std::string family = "unknown";
  std::string seeds;
  std::string graph = "complete,cycle,grid,random";
  std::string mi = "0.2,0.1,0.05,0.01";
  std::string methods = "mb-sm";
  std::size_t replications = 100;
  std::string attacked_sizes = "1";
  std::size_t budget_k = 0;
  std::size_t d = 25;
  std::size_t n = 1000;
  double alpha = 0.05;
  std::size_t boot_b = 50;
  double attack_prob = 0.5;
  double edge_prob = 0.1;
  std::string pooled_scheme = "with-replacement";
  std::size_t length = 10000;
  double onset_fraction = 0.8;
  std::size_t clean_len = 5000;
  std::string window = "400";
  std::size_t step = 50;
  std::size_t streams = 20;
  std::string bootstrap = "time";
  std::size_t stream_boot_b = 500;
  std::string csv;
  std::size_t half_window = 500;
  std::size_t stride = 100;
  bool shuffle = false;
  std::string nulls = "pooled,time";
  std::size_t time_boot_b = 500;
  bool no_difference = false;
  bool no_power_transform = false;
  bool no_standardize = false;
  bool fit_on_concat = false;
};

struct CalibrateOpts {
  Common common;
  std::string graph = "complete";
  std::size_t d = 25;
  double mi = 0.2;
  long center = -1;
  double edge_prob = 0.1;
};

// ---------------------------------------------------------------- commands

int cmd_simulate(const SimulateOpts& o) {
  if (o.common.out.empty()) throw ConfigError("simulate: --out DIR is required");
  const GraphKind kind = parse_graph_kind(o.graph);
  const Scenario sc = make_scenario(kind, o.d, o.mi, derive_seed(o.common.seed, "scenario"), o.edge_prob);

  Rng rng(derive_seed(o.common.seed, "data"));
  const Matrix reference = sample_copula(sc.copula, o.n, rng);
  Matrix query = sample_copula(sc.copula, o.n, rng);
  IndexList attacked = o.attacked.empty() ? random_subset(o.d, o.attack_count, rng) : parse_indices(o.attacked);
  std::optional<AttackPlan> plan;
  if (!attacked.empty()) {
    auto [q, p] = marginal_attack(query, attacked, rng);
    query = std::move(q);
    plan = std::move(p);
  }

  const fs::path dir(o.common.out);
  fs::create_directories(dir);
  const auto header = default_header(o.d);
  write_csv(dir / "reference.csv", header, reference);
  write_csv(dir / "query.csv", header, query);

  Json truth;
  truth["attacked"] = plan ? plan->attacked : IndexList{};
  truth["onset"] = nullptr;
  if (o.length > 0) {
    Rng srng(derive_seed(o.common.seed, "series"));
    const Matrix clean = sample_copula(sc.copula, o.length, srng);
    const auto onset = static_cast<std::size_t>(o.onset_fraction * static_cast<double>(o.length));
    if (attacked.empty() || onset >= o.length) {
      write_csv(dir / "series.csv", header, clean);
    } else {
      auto [series, splan] = marginal_attack_from(clean, attacked, onset, srng);
      write_csv(dir / "series.csv", header, series);
      truth["onset"] = onset;
    }
  }
  write_file_atomic(dir / "scenario.json", to_json(sc.spec, plan).dump(2) + "\n");
  write_file_atomic(dir / "truth.json", truth.dump(2) + "\n");
  return kOk;
}

int cmd_detect(const DetectOpts& o) {
  if (o.reference.empty() || o.query.empty()) throw ConfigError("detect: --reference and --query are required");
  const Table ref = read_csv(o.reference);
  const Table query = read_csv(o.query);
  if (ref.data.cols() != query.data.cols()) throw InvalidDataError("detect: reference and query widths differ");

  TestConfig cfg;
  cfg.estimator = o.est.resolve();
  cfg.B = o.boot_b;
  cfg.alpha = o.alpha;
  cfg.k = o.budget_k;
  cfg.bonferroni = !o.no_bonferroni;
  cfg.null_kind = parse_null_kind(o.bootstrap);
  cfg.pooled_scheme = parse_scheme(o.pooled_scheme);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("detect: alpha must lie in (0, 1)");
  if (cfg.k < 1 || cfg.k > static_cast<std::size_t>(ref.data.cols())) throw ConfigError("detect: bad --budget-k");

  std::optional<Table> clean;
  if (cfg.null_kind == NullKind::Time) {
    if (o.clean.empty()) throw ConfigError("detect: --bootstrap time needs --clean PATH");
    clean = read_csv(o.clean);
  }
  Rng rng(derive_seed(o.common.seed, "detect"));
  const DetectionReport report =
      two_stage_test(ref.data, query.data, cfg, rng, clean ? &clean->data : nullptr);
  Json j = to_json(report);
  j["features"] = ref.header;
  write_output(o.common.out, j.dump(2) + "\n");
  return kOk;
}

int cmd_stream(const StreamOpts& o) {
  if (o.input.empty()) throw ConfigError("stream: --input is required");
  if (o.clean_len == 0) throw ConfigError("stream: --clean-len is required");
  const Table table = read_csv(o.input);

  StreamConfig cfg;
  cfg.window = o.window;
  cfg.step = o.step;
  cfg.test.estimator = o.est.resolve();
  cfg.test.B = o.boot_b;
  cfg.test.alpha = o.alpha;
  cfg.test.k = o.budget_k;
  cfg.test.null_kind = parse_null_kind(o.bootstrap);
  cfg.test.pooled_scheme = parse_scheme(o.pooled_scheme);
  cfg.preprocess = {o.difference, o.power_transform, o.standardize};
  cfg.fit_on_full_series = o.fit_on_full;
  cfg.recompute_thresholds = o.recompute_thresholds;

  std::optional<AttackPlan> truth;
  if (!o.truth.empty()) {
    std::ifstream in(o.truth);
    if (!in) throw InvalidDataError("stream: cannot open '" + o.truth + "'");
    Json t;
    try {
      t = Json::parse(in);
      if (!t.at("onset").is_null()) {
        AttackPlan plan;
        plan.attacked = t.at("attacked").get<IndexList>();
        plan.onset = t.at("onset").get<std::size_t>();
        truth = plan;
      }
    } catch (const nlohmann::ordered_json::exception& e) {
      throw InvalidDataError(std::string("stream: bad truth file: ") + e.what());
    }
  }

  Rng rng(derive_seed(o.common.seed, "stream"));
  const StreamReport report = run_stream(table.data, o.clean_len, cfg, truth, rng);
  std::cout << stream_summary_json(report).dump() << "\n";
  write_output(o.common.out, stream_jsonl(report));
  return kOk;
}

int cmd_experiment(const ExperimentOpts& o) {
  ExperimentConfig cfg;
  cfg.family = parse_family(o.family);
  cfg.seeds = o.seeds.empty() ? std::vector<std::uint64_t>{o.common.seed} : parse_list<std::uint64_t>(o.seeds, "seed");
  cfg.replications = o.replications;
  cfg.graphs = parse_names<GraphKind>(o.graph, [](const std::string& s) { return parse_graph_kind(s); });
  cfg.mis = parse_list<double>(o.mi, "mi");
  cfg.methods = parse_names<Method>(o.methods, [](const std::string& s) { return parse_method(s); });
  cfg.attacked_sizes = parse_list<std::size_t>(o.attacked_sizes, "attacked size");
  cfg.budget_k = o.budget_k;
  cfg.d = o.d;
  cfg.n = o.n;
  cfg.alpha = o.alpha;
  cfg.B = o.boot_b;
  cfg.attack_prob = o.attack_prob;
  cfg.edge_prob = o.edge_prob;
  cfg.pooled_scheme = parse_scheme(o.pooled_scheme);
  cfg.estimator = o.est.resolve();
  cfg.stream.length = o.length;
  cfg.stream.onset_fraction = o.onset_fraction;
  cfg.stream.clean_len = o.clean_len;
  cfg.stream.windows = parse_list<std::size_t>(o.window, "window");
  cfg.stream.step = o.step;
  cfg.stream.streams = o.streams;
  cfg.stream.null_kind = parse_null_kind(o.bootstrap);
  cfg.stream.B = o.stream_boot_b;
  cfg.realdata.csv = o.csv;
  cfg.realdata.half_window = o.half_window;
  cfg.realdata.stride = o.stride;
  cfg.realdata.shuffle = o.shuffle;
  cfg.realdata.null_kinds = parse_names<NullKind>(o.nulls, [](const std::string& s) { return parse_null_kind(s); });
  cfg.realdata.B_pooled = o.boot_b;
  cfg.realdata.B_time = o.time_boot_b;
  cfg.realdata.preprocess = {!o.no_difference, !o.no_power_transform, !o.no_standardize};
  cfg.realdata.fit_on_concat = o.fit_on_concat;
  if (o.common.out.empty()) throw ConfigError("experiment: --out PREFIX is required");

  const ExperimentReport report = run_experiment(cfg);
  write_file_atomic(o.common.out + ".json", to_json(report, cfg).dump(2) + "\n");
  write_file_atomic(o.common.out + ".csv", report_csv(report));
  write_file_atomic(o.common.out + ".timing.csv", timing_csv(report));
  return kOk;
}

int cmd_calibrate(const CalibrateOpts& o) {
  const GraphKind kind = parse_graph_kind(o.graph);
  std::optional<std::size_t> center;
  if (o.center >= 0) center = static_cast<std::size_t>(o.center);
  const Scenario sc = make_scenario(kind, o.d, o.mi, derive_seed(o.common.seed, "scenario"), o.edge_prob, center);
  Json j;
  j["graph"] = std::string(to_string(kind));
  j["d"] = o.d;
  j["center"] = sc.spec.center;
  j["target_mi"] = o.mi;
  j["edge_weight"] = sc.spec.edge_weight;
  j["achieved_mi"] = sc.spec.latent_mi;
  j["pd_weight_limit"] = pd_weight_limit(sc.spec.graph);
  j["edges"] = sc.spec.graph.edges.size();
  j["graph_attempts"] = sc.spec.graph_attempts;
  write_output(o.common.out, j.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------- config

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

// Turns a JSON option object into command-line tokens placed before the
// user's own arguments; every option keeps its last value, so explicit flags
// win.
std::vector<std::string> config_tokens(const std::string& path, CLI::App* sub) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  if (j.contains("command")) {
    if (j.at("command") != sub->get_name()) throw ConfigError("config is for command '" + j.at("command").get<std::string>() + "'");
    if (!j.contains("options")) throw ConfigError("config: missing 'options'");
    j = j.at("options");
  }
  if (!j.is_object()) throw ConfigError("config: expected an object");
  std::vector<std::string> tokens;
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key == "config") throw ConfigError("config: nested 'config' is not allowed");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("config: unknown key '" + key + "'");
    const Json& v = item.value();
    if (opt->get_type_size() == 0) {
      if (!v.is_boolean()) throw ConfigError("config: '" + key + "' must be true or false");
      tokens.push_back("--" + key + "=" + (v.get<bool>() ? "true" : "false"));
    } else if (v.is_string() && v.get<std::string>().empty()) {
      // CLI11 reads "--key=" as a flag awaiting the next token.
      tokens.push_back("--" + key);
      tokens.emplace_back();
    } else if (v.is_string()) {
      tokens.push_back("--" + key + "=" + v.get<std::string>());
    } else if (v.is_number() || v.is_boolean()) {
      tokens.push_back("--" + key + "=" + v.dump());
    } else {
      throw ConfigError("config: '" + key + "' must be a scalar");
    }
  }
  return tokens;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case Error::Kind::Config:
    case Error::Kind::InvalidArgument:
    case Error::Kind::WeightTooLarge:
    case Error::Kind::UnreachableTarget:
      return kUsage;
    case Error::Kind::InvalidData:
    case Error::Kind::InsufficientData:
    case Error::Kind::Shape:
      return kData;
  }
  return kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-level distribution shift detection and localization"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::map<std::string, Registry> registries;
  std::map<std::string, std::function<int()>> runners;

  SimulateOpts sim;
  {
    auto* sub = app.add_subcommand("simulate", "Generate a calibrated copula scenario and attacked data");
    auto& reg = registries["simulate"];
    add_common(reg, sub, sim.common);
    reg.option(sub, "graph", sim.graph, "complete | cycle | grid | random | chain");
    reg.option(sub, "d", sim.d, "Number of sensors");
    reg.option(sub, "n", sim.n, "Rows in the reference and query samples");
    reg.option(sub, "mi", sim.mi, "Target mutual information of the center sensor");
    reg.option(sub, "edge-prob", sim.edge_prob, "Edge probability for random graphs");
    reg.option(sub, "attack-count", sim.attack_count, "Number of sensors to attack (0: none)");
    reg.option(sub, "attacked", sim.attacked, "Explicit comma-separated attacked sensors");
    reg.option(sub, "length", sim.length, "Also write a series of this many rows (0: skip)");
    reg.option(sub, "onset-fraction", sim.onset_fraction, "Attack onset as a fraction of the series");
    runners["simulate"] = [&] { return cmd_simulate(sim); };
  }

  DetectOpts det;
  {
    auto* sub = app.add_subcommand("detect", "Two-stage test of a query sample against a reference sample");
    auto& reg = registries["detect"];
    add_common(reg, sub, det.common);
    add_estimator(reg, sub, det.est);
    reg.option(sub, "reference", det.reference, "Reference CSV");
    reg.option(sub, "query", det.query, "Query CSV");
    reg.option(sub, "clean", det.clean, "Clean series CSV for the time null");
    reg.option(sub, "alpha", det.alpha, "Significance level");
    reg.option(sub, "boot-b", det.boot_b, "Bootstrap replicates");
    reg.option(sub, "bootstrap", det.bootstrap, "pooled | time");
    reg.option(sub, "pooled-scheme", det.pooled_scheme, "with-replacement | permutation-split");
    reg.option(sub, "budget-k", det.budget_k, "Features reported when a shift is detected");
    reg.flag(sub, "no-bonferroni", det.no_bonferroni, "Test every feature at alpha instead of alpha / d");
    runners["detect"] = [&] { return cmd_detect(det); };
  }

  StreamOpts str;
  {
    auto* sub = app.add_subcommand("stream", "Sliding-window detection over a time series");
    auto& reg = registries["stream"];
    add_common(reg, sub, str.common);
    add_estimator(reg, sub, str.est);
    reg.option(sub, "input", str.input, "Series CSV");
    reg.option(sub, "truth", str.truth, "Ground-truth JSON written by simulate");
    reg.option(sub, "clean-len", str.clean_len, "Rows known to be clean at the start of the series");
    reg.option(sub, "window", str.window, "Window size K");
    reg.option(sub, "step", str.step, "Rows between windows");
    reg.option(sub, "budget-k", str.budget_k, "Features reported per detection");
    reg.option(sub, "alpha", str.alpha, "Significance level");
    reg.option(sub, "bootstrap", str.bootstrap, "pooled | time");
    reg.option(sub, "boot-b", str.boot_b, "Bootstrap replicates");
    reg.option(sub, "pooled-scheme", str.pooled_scheme, "with-replacement | permutation-split");
    reg.flag(sub, "difference", str.difference, "First-order differencing");
    reg.flag(sub, "power-transform", str.power_transform, "Yeo-Johnson transform per column");
    reg.flag(sub, "standardize", str.standardize, "Zero mean, unit variance per column");
    reg.flag(sub, "fit-on-full", str.fit_on_full, "Fit the transform on the full series");
    reg.flag(sub, "recompute-thresholds", str.recompute_thresholds, "Pooled null rebuilt for every window");
    runners["stream"] = [&] { return cmd_stream(str); };
  }

  ExperimentOpts exp;
  {
    auto* sub = app.add_subcommand("experiment", "Replicate an experiment family over a grid of cells");
    auto& reg = registries["experiment"];
    add_common(reg, sub, exp.common);
    add_estimator(reg, sub, exp.est, true);
    reg.option(sub, "family", exp.family, "fixed | unknown | multi | stream | realdata");
    reg.option(sub, "seeds", exp.seeds, "Comma-separated seeds (default: --seed)");
    reg.option(sub, "graph", exp.graph, "Comma-separated graphs");
    reg.option(sub, "mi", exp.mi, "Comma-separated MI targets");
    reg.option(sub, "method", exp.methods, "Comma-separated methods");
    reg.option(sub, "replications", exp.replications, "Replications per seed and cell");
    reg.option(sub, "attacked-sizes", exp.attacked_sizes, "Comma-separated attacked-set sizes");
    reg.option(sub, "budget-k", exp.budget_k, "Localization budget (0: attacked-set size)");
    reg.option(sub, "d", exp.d, "Number of sensors");
    reg.option(sub, "n", exp.n, "Rows per sample");
    reg.option(sub, "alpha", exp.alpha, "Significance level");
    reg.option(sub, "boot-b", exp.boot_b, "Pooled bootstrap replicates");
    reg.option(sub, "attack-prob", exp.attack_prob, "Probability that a replication is attacked");
    reg.option(sub, "edge-prob", exp.edge_prob, "Edge probability for random graphs");
    reg.option(sub, "pooled-scheme", exp.pooled_scheme, "with-replacement | permutation-split");
    reg.option(sub, "length", exp.length, "Stream length");
    reg.option(sub, "onset-fraction", exp.onset_fraction, "Stream attack onset fraction");
    reg.option(sub, "clean-len", exp.clean_len, "Clean prefix of each stream");
    reg.option(sub, "window", exp.window, "Comma-separated stream window sizes");
    reg.option(sub, "step", exp.step, "Stream step");
    reg.option(sub, "streams", exp.streams, "Streams per seed and cell");
    reg.option(sub, "bootstrap", exp.bootstrap, "Stream null: pooled | time");
    reg.option(sub, "stream-boot-b", exp.stream_boot_b, "Stream bootstrap replicates");
    reg.option(sub, "csv", exp.csv, "Real-data CSV");
    reg.option(sub, "half-window", exp.half_window, "Real-data |X| = |Y|");
    reg.option(sub, "stride", exp.stride, "Real-data step between trials");
    reg.flag(sub, "shuffle", exp.shuffle, "Shuffle the time axis first");
    reg.option(sub, "nulls", exp.nulls, "Comma-separated real-data nulls");
    reg.option(sub, "time-boot-b", exp.time_boot_b, "Real-data time-null replicates");
    reg.flag(sub, "no-difference", exp.no_difference, "Skip differencing");
    reg.flag(sub, "no-power-transform", exp.no_power_transform, "Skip the Yeo-Johnson transform");
    reg.flag(sub, "no-standardize", exp.no_standardize, "Skip standardization");
    reg.flag(sub, "fit-on-concat", exp.fit_on_concat, "Fit the transform on X and Y together");
    runners["experiment"] = [&] { return cmd_experiment(exp); };
  }

  CalibrateOpts cal;
  {
    auto* sub = app.add_subcommand("calibrate", "Edge weight that reaches a center-sensor MI target");
    auto& reg = registries["calibrate"];
    add_common(reg, sub, cal.common);
    reg.option(sub, "graph", cal.graph, "complete | cycle | grid | random | chain");
    reg.option(sub, "d", cal.d, "Number of sensors");
    reg.option(sub, "mi", cal.mi, "Target mutual information");
    reg.option(sub, "center", cal.center, "Center sensor (-1: default)");
    reg.option(sub, "edge-prob", cal.edge_prob, "Edge probability for random graphs");
    runners["calibrate"] = [&] { return cmd_calibrate(cal); };
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (!args.empty()) {
      if (CLI::App* sub = app.get_subcommand_no_throw(args.front())) {
        const std::string path = config_path(args);
        if (!path.empty()) {
          std::vector<std::string> tokens = config_tokens(path, sub);
          args.insert(args.begin() + 1, tokens.begin(), tokens.end());
        }
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Json resolved;
    resolved["command"] = name;
    resolved["options"] = registries.at(name).resolved();
    std::cout << resolved.dump() << std::endl;
    return runners.at(name)();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

#include "featshift/report_io.hpp"

#include <algorithm>
#include <sstream>

#include "featshift/csv.hpp"
#include "featshift/error.hpp"

namespace featshift {

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

namespace {

template <class T>
void read_if(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T, class Parse>
void read_enum(const Json& j, const char* key, T& out, Parse parse) {
  std::string name;
  read_if(j, key, name);
  if (!name.empty()) out = parse(name);
}

template <class T, class Parse>
void read_enum_list(const Json& j, const char* key, std::vector<T>& out, Parse parse) {
  std::vector<std::string> names;
  if (!j.contains(key)) return;
  read_if(j, key, names);
  out.clear();
  for (const auto& n : names) out.push_back(parse(n));
}

template <class T, class Fn>
Json names(const std::vector<T>& values, Fn fn) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(std::string(fn(v)));
  return out;
}

std::string scheme_name(PooledScheme s) {
  return s == PooledScheme::WithReplacement ? "with-replacement" : "permutation-split";
}

PooledScheme parse_scheme(std::string_view name) {
  if (name == "with-replacement") return PooledScheme::WithReplacement;
  if (name == "permutation-split") return PooledScheme::PermutationSplit;
  throw ConfigError("unknown pooled scheme '" + std::string(name) + "'");
}

Json preprocess_json(const PreprocessFlags& f) {
  return Json{{"difference", f.difference}, {"power_transform", f.power_transform}, {"standardize", f.standardize}};
}

PreprocessFlags preprocess_from_json(const Json& j, PreprocessFlags f) {
  reject_unknown_keys(j, {"difference", "power_transform", "standardize"}, "preprocess");
  read_if(j, "difference", f.difference);
  read_if(j, "power_transform", f.power_transform);
  read_if(j, "standardize", f.standardize);
  return f;
}

Json vector_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json optional_json(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_json(const std::optional<long>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const EstimatorConfig& cfg) {
  return Json{{"method", std::string(to_string(cfg.method))},
              {"density", std::string(to_string(cfg.density.kind))},
              {"ridge", cfg.density.ridge},
              {"flow_layers", cfg.density.flow.layers},
              {"flow_bins", cfg.density.flow.bins},
              {"knn_k", cfg.knn_k},
              {"n_samp", cfg.n_samp},
              {"m_per_side", cfg.m_per_side}};
}

EstimatorConfig estimator_config_from_json(const Json& j, EstimatorConfig cfg) {
  reject_unknown_keys(j, {"method", "density", "ridge", "flow_layers", "flow_bins", "knn_k", "n_samp", "m_per_side"},
                      "estimator");
  read_enum(j, "method", cfg.method, parse_method);
  read_enum(j, "density", cfg.density.kind, parse_density_kind);
  read_if(j, "ridge", cfg.density.ridge);
  read_if(j, "flow_layers", cfg.density.flow.layers);
  read_if(j, "flow_bins", cfg.density.flow.bins);
  read_if(j, "knn_k", cfg.knn_k);
  read_if(j, "n_samp", cfg.n_samp);
  read_if(j, "m_per_side", cfg.m_per_side);
  return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["family"] = std::string(to_string(cfg.family));
  j["seeds"] = cfg.seeds;
  j["replications"] = cfg.replications;
  j["graphs"] = names(cfg.graphs, [](GraphKind g) { return to_string(g); });
  j["mis"] = cfg.mis;
  j["methods"] = names(cfg.methods, [](Method m) { return to_string(m); });
  j["attacked_sizes"] = cfg.attacked_sizes;
  j["budget_k"] = cfg.budget_k;
  j["d"] = cfg.d;
  j["n"] = cfg.n;
  j["alpha"] = cfg.alpha;
  j["B"] = cfg.B;
  j["attack_prob"] = cfg.attack_prob;
  j["edge_prob"] = cfg.edge_prob;
  j["pooled_scheme"] = scheme_name(cfg.pooled_scheme);
  Json est = to_json(cfg.estimator);
  est.erase("method");
  j["estimator"] = est;
  const StreamParams& s = cfg.stream;
  j["stream"] = Json{{"length", s.length},       {"onset_fraction", s.onset_fraction},
                     {"clean_len", s.clean_len}, {"windows", s.windows},
                     {"step", s.step},           {"streams", s.streams},
                     {"null", std::string(to_string(s.null_kind))}, {"B", s.B}};
  const RealDataParams& r = cfg.realdata;
  j["realdata"] = Json{{"csv", r.csv.string()},
                       {"half_window", r.half_window},
                       {"stride", r.stride},
                       {"shuffle", r.shuffle},
                       {"nulls", names(r.null_kinds, [](NullKind k) { return to_string(k); })},
                       {"B_pooled", r.B_pooled},
                       {"B_time", r.B_time},
                       {"preprocess", preprocess_json(r.preprocess)},
                       {"fit_on_concat", r.fit_on_concat}};
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j, ExperimentConfig cfg) {
  reject_unknown_keys(j,
                      {"family", "seeds", "replications", "graphs", "mis", "methods", "attacked_sizes", "budget_k", "d",
                       "n", "alpha", "B", "attack_prob", "edge_prob", "pooled_scheme", "estimator", "stream",
                       "realdata"},
                      "experiment");
  read_enum(j, "family", cfg.family, parse_family);
  read_if(j, "seeds", cfg.seeds);
  read_if(j, "replications", cfg.replications);
  read_enum_list(j, "graphs", cfg.graphs, parse_graph_kind);
  read_if(j, "mis", cfg.mis);
  read_enum_list(j, "methods", cfg.methods, parse_method);
  read_if(j, "attacked_sizes", cfg.attacked_sizes);
  read_if(j, "budget_k", cfg.budget_k);
  read_if(j, "d", cfg.d);
  read_if(j, "n", cfg.n);
  read_if(j, "alpha", cfg.alpha);
  read_if(j, "B", cfg.B);
  read_if(j, "attack_prob", cfg.attack_prob);
  read_if(j, "edge_prob", cfg.edge_prob);
  read_enum(j, "pooled_scheme", cfg.pooled_scheme, parse_scheme);
  if (j.contains("estimator")) {
    const Json& e = j.at("estimator");
    if (e.is_object() && e.contains("method")) throw ConfigError("estimator: use the top-level 'methods' list");
    cfg.estimator = estimator_config_from_json(e, cfg.estimator);
  }
  if (j.contains("stream")) {
    const Json& s = j.at("stream");
    reject_unknown_keys(s, {"length", "onset_fraction", "clean_len", "windows", "step", "streams", "null", "B"},
                        "stream");
    read_if(s, "length", cfg.stream.length);
    read_if(s, "onset_fraction", cfg.stream.onset_fraction);
    read_if(s, "clean_len", cfg.stream.clean_len);
    read_if(s, "windows", cfg.stream.windows);
    read_if(s, "step", cfg.stream.step);
    read_if(s, "streams", cfg.stream.streams);
    read_enum(s, "null", cfg.stream.null_kind, parse_null_kind);
    read_if(s, "B", cfg.stream.B);
  }
  if (j.contains("realdata")) {
    const Json& r = j.at("realdata");
    reject_unknown_keys(r,
                        {"csv", "half_window", "stride", "shuffle", "nulls", "B_pooled", "B_time", "preprocess",
                         "fit_on_concat"},
                        "realdata");
    std::string path = cfg.realdata.csv.string();
    read_if(r, "csv", path);
    cfg.realdata.csv = path;
    read_if(r, "half_window", cfg.realdata.half_window);
    read_if(r, "stride", cfg.realdata.stride);
    read_if(r, "shuffle", cfg.realdata.shuffle);
    read_enum_list(r, "nulls", cfg.realdata.null_kinds, parse_null_kind);
    read_if(r, "B_pooled", cfg.realdata.B_pooled);
    read_if(r, "B_time", cfg.realdata.B_time);
    if (r.contains("preprocess")) cfg.realdata.preprocess = preprocess_from_json(r.at("preprocess"), cfg.realdata.preprocess);
    read_if(r, "fit_on_concat", cfg.realdata.fit_on_concat);
  }
  return cfg;
}

Json to_json(const Thresholds& thr) {
  return Json{{"alpha", thr.alpha},
              {"corrected", thr.corrected},
              {"level", thr.level},
              {"order_index", thr.order_index},
              {"per_feature", vector_json(thr.per_feature)}};
}

Json to_json(const DetectionReport& report) {
  Json j;
  j["detected"] = report.detected;
  j["localized"] = report.localized;
  j["method"] = std::string(to_string(report.stats.method));
  j["eval_points"] = report.stats.eval_points;
  j["stats"] = vector_json(report.stats.values);
  j["thresholds"] = to_json(report.thresholds);
  j["window_step"] = optional_json(report.window_step);
  return j;
}

Json stream_summary_json(const StreamReport& report) {
  Json j;
  j["steps"] = report.steps.size();
  j["clean_len"] = report.clean_len;
  j["onset"] = optional_json(report.onset);
  j["t_comp"] = optional_json(report.t_comp);
  j["t_det"] = optional_json(report.t_det);
  j["delay"] = optional_json(report.delay);
  j["pre_onset_alarm"] = report.pre_onset_alarm;
  j["t_det_after_onset"] = optional_json(report.t_det_after_onset);
  j["delay_after_onset"] = optional_json(report.delay_after_onset);
  std::size_t detections = 0;
  for (const auto& s : report.steps) detections += s.detected;
  j["detecting_steps"] = detections;
  j["thresholds"] = report.thresholds.dim() ? to_json(report.thresholds) : Json(nullptr);
  j["lambdas"] = report.preprocessor.lambdas();
  j["warnings"] = report.warnings;
  return j;
}

std::string stream_jsonl(const StreamReport& report) {
  std::string out;
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    const DetectionReport& s = report.steps[i];
    Json j;
    j["step"] = i;
    j["window_start"] = report.window_starts[i];
    j["detected"] = s.detected;
    j["localized"] = s.localized;
    j["stats"] = vector_json(s.stats.values);
    j["thresholds"] = vector_json(s.thresholds.per_feature);
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

Json pr_json(const PrecisionRecall& pr) {
  return Json{{"precision", pr.precision}, {"recall", pr.recall}, {"degenerate", pr.degenerate},
              {"tp", pr.counts.tp},        {"fp", pr.counts.fp},  {"fn", pr.counts.fn},
              {"tn", pr.counts.tn}};
}

}  // namespace

Json to_json(const ExperimentReport& report, const ExperimentConfig& cfg) {
  Json j;
  j["schema_version"] = report.schema_version;
  j["family"] = std::string(to_string(report.family));
  j["config"] = to_json(cfg);
  Json cells = Json::array();
  for (const CellResult& c : report.cells) {
    Json cj;
    cj["graph"] = c.graph;
    cj["mi"] = c.mi;
    cj["method"] = std::string(to_string(c.method));
    cj["attacked_count"] = c.attacked_count;
    cj["k"] = c.k;
    cj["window"] = c.window;
    cj["null"] = c.null_kind;
    cj["shuffled"] = c.shuffled;
    cj["trials"] = c.trials;
    cj["attacked_trials"] = c.attacked_trials;
    cj["localization"] = pr_json(c.localization);
    cj["detection"] = pr_json(c.detection);
    cj["stream_recall"] = optional_json(c.stream_recall);
    cj["mean_delay"] = optional_json(c.mean_delay);
    cj["pre_onset_alarms"] = c.pre_onset_alarms;
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "family,graph,mi,method,attacked_count,k,window,null,shuffled,trials,attacked_trials,"
        "precision,recall,degenerate,tp,fp,fn,tn,det_precision,det_recall,stream_recall,mean_delay,pre_onset_alarms\n";
  for (const CellResult& c : report.cells) {
    os << to_string(report.family) << ',' << c.graph << ',' << format_double(c.mi) << ',' << to_string(c.method) << ','
       << c.attacked_count << ',' << c.k << ',' << c.window << ',' << c.null_kind << ',' << (c.shuffled ? 1 : 0) << ','
       << c.trials << ',' << c.attacked_trials << ',' << format_double(c.localization.precision) << ','
       << format_double(c.localization.recall) << ',' << (c.localization.degenerate ? 1 : 0) << ','
       << c.localization.counts.tp << ',' << c.localization.counts.fp << ',' << c.localization.counts.fn << ','
       << c.localization.counts.tn << ',' << format_double(c.detection.precision) << ','
       << format_double(c.detection.recall) << ',' << (c.stream_recall ? format_double(*c.stream_recall) : "") << ','
       << (c.mean_delay ? format_double(*c.mean_delay) : "") << ',' << c.pre_onset_alarms << '\n';
  }
  return os.str();
}

std::string timing_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "graph,mi,method,attacked_count,window,null,seconds_per_test\n";
  for (const CellResult& c : report.cells) {
    os << c.graph << ',' << format_double(c.mi) << ',' << to_string(c.method) << ',' << c.attacked_count << ','
       << c.window << ',' << c.null_kind << ',' << format_double(c.mean_elapsed) << '\n';
  }
  return os.str();
}

}  // namespace featshift
